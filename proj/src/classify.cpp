#include "tvb/classify.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

namespace tvb {

namespace {

Predicate make_predicate(double residual, double threshold) { return {residual, residual < threshold}; }

double deviation_norm(const Tensor& a, double coeff, const CurvatureData& cd) {
  Tensor t = a;
  t -= coeff * cd.g;
  return norm(t, cd.g, cd.g_inv);
}

void fill_algebraic(const CurvatureData& cd, const ClassifyOptions& opt, ClassificationReport& r) {
  const int d = cd.dim();
  const int n = cd.n();
  r.point = cd.point;
  r.dim = d;
  r.tol = opt.tol;
  r.curvature_norm = norm(cd.riemann, cd.g, cd.g_inv);
  const double thr = opt.tol * std::max(1.0, r.curvature_norm);

  r.tau = cd.tau;
  r.tau_star = cd.tau_star;
  r.s = 3 * cd.tau_star - cd.tau;

  r.einstein = make_predicate(deviation_norm(cd.ricci, cd.tau / (2 * n), cd), thr);
  r.weakly_star_einstein = make_predicate(deviation_norm(cd.ricci_star, cd.tau_star / (2 * n), cd), thr);
  r.star_equals_ricci = make_predicate(norm(cd.ricci_star - cd.ricci, cd.g, cd.g_inv), thr);
  r.bochner_flat = make_predicate(norm(bochner_tensor(cd, n), cd.g, cd.g_inv), thr);
  const Tensor W = weyl_tensor(cd);
  const double wnorm = norm(W, cd.g, cd.g_inv);
  r.weyl_flat = make_predicate(wnorm, thr);

  const FrameData fd = to_adapted_frame(cd);
  r.gray_identity = make_predicate(gray_identity_residual(fd), thr);

  double G = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double a = fd.ricci_star(i, j) - fd.ricci_star(j, i);
      G += a * a;
    }
  r.G = G;

  Eigen::MatrixXd ric(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) ric(i, j) = 0.5 * (fd.ricci(i, j) + fd.ricci(j, i));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ric, Eigen::EigenvaluesOnly);
  r.ricci_eigenvalues.resize(d);
  for (int i = 0; i < d; ++i) r.ricci_eigenvalues[i] = es.eigenvalues()[d - 1 - i];

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  double hmin = std::numeric_limits<double>::infinity();
  double hmax = -hmin;
  double hsum = 0.0;
  std::vector<double> x(d);
  const int dirs = std::max(1, opt.hol_directions);
  for (int k = 0; k < dirs; ++k) {
    for (double& v : x) v = normal(rng);
    const double h = hol_sect_curv(cd.riemann, cd.g, cd.J, x);
    hmin = std::min(hmin, h);
    hmax = std::max(hmax, h);
    hsum += h;
  }
  r.hol_sect_min = hmin;
  r.hol_sect_max = hmax;
  r.hol_sect_mean = hsum / dirs;
  r.const_hol_sect = make_predicate(hmax - hmin, thr);

  if (d == 4) {
    const Lambda2Basis basis = lambda2_basis(fd.frame, cd.J);
    // Trace-freeness of W is exact up to roundoff; check it loosely here so
    // that an ill-conditioned point reports instead of throwing.
    const WeylBlocks blocks = weyl_operator(W, cd.g_inv, basis, 1e-6);
    const WeylNorms wn = wpm_norms(blocks);
    r.weyl_norms = wn;
    r.self_dual = make_predicate(std::sqrt(wn.minus_sq), thr);
    r.anti_self_dual = make_predicate(std::sqrt(wn.plus_sq), thr);
    r.weyl_block_consistency = std::abs(wnorm * wnorm - 4 * (wn.plus_sq + wn.minus_sq));
    r.uvwh = uvwh(fd);
    r.densities = characteristic_integrands(cd, blocks, G);
  }
}

}  // namespace

ClassificationReport classify_algebraic(const CurvatureData& cd, const ClassifyOptions& opt) {
  ClassificationReport r;
  fill_algebraic(cd, opt, r);
  return r;
}

ClassificationReport classify_point(const Chart& chart, std::span<const double> point, const ClassifyOptions& opt) {
  chart.check_point(point);
  const PointJet jet = chart.jet(point, 3);
  const CurvatureData cd = curvature(jet);
  ClassificationReport r;
  fill_algebraic(cd, opt, r);
  const double thr = opt.tol * std::max(1.0, r.curvature_norm);

  const Christoffel& conn = *cd.connection;
  r.kahler = make_predicate(norm(nabla_J(jet, conn), cd.g, cd.g_inv), opt.tol);
  r.almost_kahler = make_predicate(norm(d_omega(jet), cd.g, cd.g_inv), opt.tol);
  r.hermitian = make_predicate(norm(nijenhuis(jet), cd.g, cd.g_inv), opt.tol);
  r.parallel_curvature = make_predicate(norm(nabla_R(jet, conn, cd.riemann), cd.g, cd.g_inv), thr);
  return r;
}

const std::vector<std::string>& ClassificationReport::predicate_names() {
  static const std::vector<std::string> names{
      "kahler",         "almost_kahler",  "hermitian",     "parallel_curvature", "einstein",
      "weakly_star_einstein", "star_equals_ricci", "bochner_flat", "weyl_flat",       "self_dual",
      "anti_self_dual", "gray_identity",  "const_hol_sect"};
  return names;
}

const Predicate* ClassificationReport::predicate(std::string_view name) const {
  const auto opt = [](const std::optional<Predicate>& p) { return p ? &*p : nullptr; };
  if (name == "kahler") return opt(kahler);
  if (name == "almost_kahler") return opt(almost_kahler);
  if (name == "hermitian") return opt(hermitian);
  if (name == "parallel_curvature") return opt(parallel_curvature);
  if (name == "einstein") return &einstein;
  if (name == "weakly_star_einstein") return &weakly_star_einstein;
  if (name == "star_equals_ricci") return &star_equals_ricci;
  if (name == "bochner_flat") return &bochner_flat;
  if (name == "weyl_flat") return &weyl_flat;
  if (name == "self_dual") return opt(self_dual);
  if (name == "anti_self_dual") return opt(anti_self_dual);
  if (name == "gray_identity") return &gray_identity;
  if (name == "const_hol_sect") return &const_hol_sect;
  throw std::invalid_argument("unknown predicate '" + std::string(name) + "'");
}

double ClassificationReport::scalar(std::string_view name) const {
  const auto need_uvwh = [&]() -> const Uvwh& {
    if (!uvwh) throw std::invalid_argument("scalar '" + std::string(name) + "' needs real dimension 4");
    return *uvwh;
  };
  if (name == "tau") return tau;
  if (name == "tau_star") return tau_star;
  if (name == "s") return s;
  if (name == "G") return G;
  if (name == "hol_sect") return hol_sect_mean;
  if (name == "tau_star_minus_4H") return tau_star - 4 * hol_sect_mean;
  if (name == "u") return need_uvwh().u;
  if (name == "v") return need_uvwh().v;
  if (name == "w") return need_uvwh().w;
  if (name == "h") return need_uvwh().h;
  if (name.starts_with("ricci_eig")) {
    int k = 0;
    const auto tail = name.substr(9);
    const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), k);
    if (ec == std::errc() && ptr == tail.data() + tail.size() && k >= 1 &&
        k <= static_cast<int>(ricci_eigenvalues.size())) {
      return ricci_eigenvalues[k - 1];
    }
  }
  throw std::invalid_argument("unknown scalar '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------

double GridAxis::value(int k) const {
  if (count <= 1) return lo;
  return lo + (hi - lo) * k / (count - 1);
}

std::size_t GridSpec::size() const {
  if (axes.empty()) return 0;
  std::size_t n = 1;
  for (const GridAxis& a : axes) n *= static_cast<std::size_t>(std::max(0, a.count));
  return n;
}

std::vector<double> GridSpec::point(std::size_t index) const {
  std::vector<double> p(axes.size());
  for (std::size_t a = axes.size(); a-- > 0;) {
    const std::size_t c = static_cast<std::size_t>(axes[a].count);
    p[a] = axes[a].value(static_cast<int>(index % c));
    index /= c;
  }
  return p;
}

namespace {

double parse_number(std::string_view s, std::string_view whole) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("malformed grid '" + std::string(whole) + "': bad number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

GridSpec GridSpec::parse(std::string_view text) {
  GridSpec g;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view item = text.substr(start, end - start);
    GridAxis axis;
    const std::size_t c1 = item.find(':');
    if (c1 == std::string_view::npos) {
      axis.lo = axis.hi = parse_number(item, text);
    } else {
      const std::size_t c2 = item.find(':', c1 + 1);
      if (c2 == std::string_view::npos) {
        throw std::invalid_argument("malformed grid '" + std::string(text) + "': expected lo:hi:count");
      }
      axis.lo = parse_number(item.substr(0, c1), text);
      axis.hi = parse_number(item.substr(c1 + 1, c2 - c1 - 1), text);
      const double c = parse_number(item.substr(c2 + 1), text);
      if (c < 1 || c != std::floor(c)) {
        throw std::invalid_argument("malformed grid '" + std::string(text) + "': count must be a positive integer");
      }
      axis.count = static_cast<int>(c);
    }
    g.axes.push_back(axis);
    start = end + 1;
  }
  return g;
}

std::string GridSpec::to_string() const {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (i) os << ',';
    os << axes[i].lo << ':' << axes[i].hi << ':' << axes[i].count;
  }
  return os.str();
}

const PredicateSummary& GridSummary::predicate(std::string_view name) const {
  for (const auto& p : predicates)
    if (p.name == name) return p;
  throw std::invalid_argument("no summary for predicate '" + std::string(name) + "'");
}

const ScalarSummary& GridSummary::scalar(std::string_view name) const {
  for (const auto& s : scalars)
    if (s.name == name) return s;
  throw std::invalid_argument("no summary for scalar '" + std::string(name) + "'");
}

GridSummary summarize(std::span<const ClassificationReport> reports) {
  GridSummary sum;
  sum.points = reports.size();
  for (const std::string& name : ClassificationReport::predicate_names()) {
    PredicateSummary ps;
    ps.name = name;
    ps.min_residual = std::numeric_limits<double>::infinity();
    for (const auto& r : reports) {
      const Predicate* p = r.predicate(name);
      if (!p) continue;
      ++ps.evaluated;
      if (p->holds) ++ps.holds;
      ps.max_residual = std::max(ps.max_residual, p->residual);
      ps.min_residual = std::min(ps.min_residual, p->residual);
    }
    if (ps.evaluated == 0) continue;
    sum.predicates.push_back(ps);
  }
  std::vector<std::string> scalar_names{"tau", "tau_star", "s", "G", "hol_sect"};
  if (!reports.empty() && reports.front().uvwh) {
    for (const char* n : {"u", "v", "w", "h"}) scalar_names.emplace_back(n);
  }
  for (const std::string& name : scalar_names) {
    ScalarSummary ss;
    ss.name = name;
    ss.min = std::numeric_limits<double>::infinity();
    ss.max = -ss.min;
    for (const auto& r : reports) {
      const double v = r.scalar(name);
      ss.min = std::min(ss.min, v);
      ss.max = std::max(ss.max, v);
    }
    if (reports.empty()) ss.min = ss.max = 0.0;
    sum.scalars.push_back(ss);
  }
  return sum;
}

GridResult classify_grid(const Chart& chart, const GridSpec& grid, const ClassifyOptions& opt) {
  const std::size_t total = grid.size();
  if (total == 0) throw std::invalid_argument("empty grid");
  if (static_cast<int>(grid.axes.size()) != chart.dim()) {
    throw std::invalid_argument("grid has " + std::to_string(grid.axes.size()) + " axes, chart '" + chart.name() +
                                "' has dimension " + std::to_string(chart.dim()));
  }
  for (std::size_t k = 0; k < total; ++k) {
    const std::vector<double> p = grid.point(k);
    if (!chart.spec().domain.contains(p, opt.margin)) {
      std::ostringstream os;
      os.precision(9);
      os << "grid point (";
      for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
      os << ") is within margin " << opt.margin << " of the domain boundary of chart '" << chart.name() << "' ("
         << chart.spec().domain.text() << ")";
      throw GridDomainError(os.str());
    }
  }

  GridResult out;
  out.grid = grid;
  out.reports.resize(total);
  unsigned workers = opt.threads > 0 ? static_cast<unsigned>(opt.threads) : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(std::min<std::size_t>(total, 256)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto work = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= total) return;
      try {
        out.reports[k] = classify_point(chart, grid.point(k), opt);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(total);
        return;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  out.summary = summarize(out.reports);
  return out;
}

// ---------------------------------------------------------------------------

bool AuditReport::passed() const {
  return std::all_of(items.begin(), items.end(), [](const AuditItem& i) { return i.passed(); });
}

namespace {

struct AuditCheck {
  const char* name;
  const char* statement;
  // Returns {hypothesis holds, conclusion residual, conclusion holds}.
  std::function<std::array<double, 3>(const ClassificationReport&)> eval;
};

}  // namespace

AuditReport theorem_audit(std::span<const ClassificationReport> reports) {
  if (reports.empty()) throw std::invalid_argument("theorem audit needs at least one point");
  AuditReport out;
  out.points = reports.size();
  for (const auto& r : reports) {
    if (r.dim != 4) throw std::invalid_argument("theorem audit needs real dimension 4");
    out.max_bochner_residual = std::max(out.max_bochner_residual, r.bochner_flat.residual);
  }
  for (const auto& r : reports) {
    if (!r.bochner_flat.holds) {
      std::ostringstream os;
      os.precision(9);
      os << "refusing audit: chart is not Bochner-flat at (";
      for (std::size_t i = 0; i < r.point.size(); ++i) os << (i ? ", " : "") << r.point[i];
      os << "), |B(R)| = " << r.bochner_flat.residual;
      throw NotBochnerFlat(os.str());
    }
  }

  const auto thr = [](const ClassificationReport& r) { return r.tol * std::max(1.0, r.curvature_norm); };
  // ρ* symmetric and 3τ*-τ = 0, as one residual.
  const auto criterion = [&](const ClassificationReport& r) { return std::max(std::sqrt(r.G), std::abs(r.s)); };

  const std::vector<AuditCheck> checks{
      {"theorem_3_2", "Bochner-flat => self-dual",
       [](const ClassificationReport& r) -> std::array<double, 3> {
         return {1.0, r.self_dual->residual, r.self_dual->holds ? 1.0 : 0.0};
       }},
      {"theorem_3_3", "Bochner-flat => (anti-self-dual <=> rho* symmetric and 3tau*-tau = 0)",
       [&](const ClassificationReport& r) -> std::array<double, 3> {
         const bool rhs = criterion(r) < thr(r);
         const bool lhs = r.anti_self_dual->holds;
         return {1.0, lhs ? criterion(r) : r.anti_self_dual->residual, lhs == rhs ? 1.0 : 0.0};
       }},
      {"corollary_conformally_flat", "Bochner-flat => (W = 0 <=> rho* symmetric and 3tau*-tau = 0)",
       [&](const ClassificationReport& r) -> std::array<double, 3> {
         const bool rhs = criterion(r) < thr(r);
         const bool lhs = r.weyl_flat.holds;
         return {1.0, lhs ? criterion(r) : r.weyl_flat.residual, lhs == rhs ? 1.0 : 0.0};
       }},
      {"curvature_identity", "Bochner-flat => curvature identity (14)",
       [](const ClassificationReport& r) -> std::array<double, 3> {
         return {1.0, r.gray_identity.residual, r.gray_identity.holds ? 1.0 : 0.0};
       }},
      {"kahler_star_ricci", "Kahler => rho* = rho",
       [](const ClassificationReport& r) -> std::array<double, 3> {
         const bool hyp = r.kahler && r.kahler->holds;
         return {hyp ? 1.0 : 0.0, r.star_equals_ricci.residual, r.star_equals_ricci.holds ? 1.0 : 0.0};
       }},
      {"einstein_uvwh", "Bochner-flat Einstein => u = v = -(tau*-tau)/8, w = 0, h = 0",
       [&](const ClassificationReport& r) -> std::array<double, 3> {
         const Uvwh& q = *r.uvwh;
         const double target = -(r.tau_star - r.tau) / 8.0;
         const double res = std::max({std::abs(q.u - target), std::abs(q.v - target), std::abs(q.w), std::abs(q.h)});
         return {r.einstein.holds ? 1.0 : 0.0, res, res < thr(r) ? 1.0 : 0.0};
       }},
  };

  for (const AuditCheck& c : checks) {
    AuditItem item;
    item.name = c.name;
    item.statement = c.statement;
    for (const auto& r : reports) {
      const auto [hyp, residual, ok] = c.eval(r);
      if (hyp == 0.0) continue;
      ++item.applicable;
      if (ok == 0.0) ++item.counterexamples;
      if (item.worst_point.empty() || residual > item.worst_residual) {
        item.worst_residual = residual;
        item.worst_point = r.point;
      }
    }
    out.items.push_back(std::move(item));
  }
  return out;
}

AuditReport theorem_audit(const Chart& chart, const GridSpec& grid, const ClassifyOptions& opt) {
  if (chart.dim() != 4) throw std::invalid_argument("theorem audit needs real dimension 4");
  const GridResult res = classify_grid(chart, grid, opt);
  return theorem_audit(res.reports);
}

}  // namespace tvb
