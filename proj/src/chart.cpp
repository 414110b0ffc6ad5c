#include "tvb/chart.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace tvb {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_conjunction(std::string_view text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == ',') {
      parts.push_back(trim(text.substr(start, i - start)));
      start = i + 1;
    } else if (text[i] == '&' && i + 1 < text.size() && text[i + 1] == '&') {
      parts.push_back(trim(text.substr(start, i - start)));
      start = i + 2;
      ++i;
    }
  }
  parts.push_back(trim(text.substr(start)));
  return parts;
}

}  // namespace

Domain Domain::parse(std::string_view text, std::span<const std::string> coords) {
  Domain d;
  d.text_ = trim(text);
  if (d.text_.empty()) return d;
  for (const std::string& part : split_conjunction(text)) {
    if (part.empty()) throw ParseError("empty domain constraint", 0);
    const std::size_t pos = part.find_first_of("<>");
    if (pos == std::string::npos) throw ParseError("domain constraint needs '<' or '>': " + part, 0);
    const bool greater = part[pos] == '>';
    const bool strict = !(pos + 1 < part.size() && part[pos + 1] == '=');
    const std::string lhs = part.substr(0, pos);
    const std::string rhs = part.substr(pos + (strict ? 1 : 2));
    Expr a = tvb::parse(lhs, coords);
    Expr b = tvb::parse(rhs, coords);
    Constraint c;
    c.slack = (greater ? a - b : b - a).simplify();
    c.strict = strict;
    c.text = part;
    d.constraints_.push_back(std::move(c));
  }
  return d;
}

bool Domain::contains(std::span<const double> point, double margin) const {
  for (const Constraint& c : constraints_) {
    double v = 0.0;
    try {
      v = c.slack.eval(point);
    } catch (const DomainError&) {
      return false;
    }
    if (!std::isfinite(v)) return false;
    if (margin > 0.0) {
      if (v < margin) return false;
    } else if (c.strict ? v <= 0.0 : v < 0.0) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

Chart::Chart(ChartSpec spec) : spec_(std::move(spec)) {
  const int d = spec_.dim();
  if (d < 4 || d % 2 != 0) {
    throw std::invalid_argument("chart '" + spec_.name + "': dimension must be even and >= 4, got " +
                                std::to_string(d));
  }
  const std::size_t dd = static_cast<std::size_t>(d) * d;
  if (spec_.g.size() != dd || spec_.J.size() != dd) {
    throw std::invalid_argument("chart '" + spec_.name + "': g and J need dim*dim entries");
  }
  for (const auto* m : {&spec_.g, &spec_.J}) {
    for (const Expr& e : *m) {
      if (e.max_variable() >= d) throw std::invalid_argument("chart '" + spec_.name + "': undeclared coordinate");
    }
  }
  for (auto& e : spec_.g) e = e.simplify();
  for (auto& e : spec_.J) e = e.simplify();
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      if (!(spec_.g_at(i, j) == spec_.g_at(j, i))) {
        throw std::invalid_argument("chart '" + spec_.name + "': metric is not symmetric at (" +
                                    std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      }
    }

  // order_offset_[k] = start of the order-k block inside one entry's table.
  order_offset_.assign(kMaxOrder + 2, 0);
  std::size_t block = 1;
  for (int k = 0; k <= kMaxOrder; ++k) {
    order_offset_[k + 1] = order_offset_[k] + block;
    block *= static_cast<std::size_t>(d);
  }
  const std::size_t per_entry = order_offset_[kMaxOrder + 1];
  const std::size_t entries = static_cast<std::size_t>(d) * (d + 1) / 2;
  metric_derivs_.assign(entries * per_entry, Expr());

  std::size_t entry = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j, ++entry) {
      Expr* table = &metric_derivs_[entry * per_entry];
      table[0] = spec_.g_at(i, j);
      // Fill sorted multi-indices from their sorted prefix, then copy to
      // every permutation.
      for (int k = 1; k <= kMaxOrder; ++k) {
        const std::size_t count = order_offset_[k + 1] - order_offset_[k];
        std::vector<int> idx(k);
        for (std::size_t flat = 0; flat < count; ++flat) {
          std::size_t f = flat;
          for (int m = k - 1; m >= 0; --m) {
            idx[m] = static_cast<int>(f % d);
            f /= d;
          }
          if (!std::is_sorted(idx.begin(), idx.end())) continue;
          std::size_t prefix = 0;
          for (int m = 0; m < k - 1; ++m) prefix = prefix * d + idx[m];
          const Expr& parent = table[order_offset_[k - 1] + prefix];
          table[order_offset_[k] + flat] = parent.differentiate(idx[k - 1]);
        }
        for (std::size_t flat = 0; flat < count; ++flat) {
          std::size_t f = flat;
          for (int m = k - 1; m >= 0; --m) {
            idx[m] = static_cast<int>(f % d);
            f /= d;
          }
          if (std::is_sorted(idx.begin(), idx.end())) continue;
          std::vector<int> sorted = idx;
          std::sort(sorted.begin(), sorted.end());
          std::size_t s = 0;
          for (int m = 0; m < k; ++m) s = s * d + sorted[m];
          table[order_offset_[k] + flat] = table[order_offset_[k] + s];
        }
      }
    }

  J_derivs_.resize(dd * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int a = 0; a < d; ++a) J_derivs_[(static_cast<std::size_t>(i) * d + j) * d + a] = spec_.J_at(i, j).differentiate(a);
}

std::size_t Chart::slot(int i, int j, std::span<const int> coords) const {
  const int d = dim();
  if (i > j) std::swap(i, j);
  const std::size_t entry = static_cast<std::size_t>(i) * d - static_cast<std::size_t>(i) * (i - 1) / 2 + (j - i);
  const int k = static_cast<int>(coords.size());
  if (k > kMaxOrder) throw std::out_of_range("metric derivative order above 3");
  std::size_t flat = 0;
  for (int c : coords) {
    if (c < 0 || c >= d) throw std::out_of_range("coordinate index out of range");
    flat = flat * d + c;
  }
  return entry * order_offset_[kMaxOrder + 1] + order_offset_[k] + flat;
}

const Expr& Chart::metric_derivative(int i, int j, std::span<const int> coords) const {
  return metric_derivs_[slot(i, j, coords)];
}

const Expr& Chart::structure_derivative(int i, int j, int coord) const {
  const int d = dim();
  return J_derivs_[(static_cast<std::size_t>(i) * d + j) * d + coord];
}

PointJet Chart::jet(std::span<const double> point, int order) const {
  const int d = dim();
  if (static_cast<int>(point.size()) != d) {
    throw std::invalid_argument("point has " + std::to_string(point.size()) + " coordinates, chart '" + name() +
                                "' needs " + std::to_string(d));
  }
  if (order < 1 || order > kMaxOrder) throw std::out_of_range("jet order must be 1..3");
  if (!spec_.domain.contains(point)) {
    throw ChartDomainError("point outside domain of chart '" + name() + "' (" + spec_.domain.text() + ")");
  }

  PointJet jet;
  jet.point.assign(point.begin(), point.end());
  jet.order = order;
  jet.g = Tensor::covariant(d, 2);
  jet.dg = Tensor::covariant(d, 3);
  if (order >= 2) jet.ddg = Tensor::covariant(d, 4);
  if (order >= 3) jet.dddg = Tensor::covariant(d, 5);
  jet.J = Tensor::mixed(d);
  jet.dJ = Tensor(d, {Variance::Covariant, Variance::Contravariant, Variance::Covariant});

  const auto value = [&](const Expr& e) {
    try {
      return e.eval(point);
    } catch (const DomainError& err) {
      throw ChartDomainError(std::string("chart '") + name() + "': " + err.what());
    }
  };

  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      const std::size_t base = slot(i, j, {});
      const Expr* table = &metric_derivs_[base];
      const double v = value(table[0]);
      jet.g(i, j) = jet.g(j, i) = v;
      for (int a = 0; a < d; ++a) {
        const double v1 = value(table[order_offset_[1] + a]);
        jet.dg(a, i, j) = jet.dg(a, j, i) = v1;
        if (order < 2) continue;
        for (int b = a; b < d; ++b) {
          const double v2 = value(table[order_offset_[2] + a * d + b]);
          jet.ddg(a, b, i, j) = jet.ddg(a, b, j, i) = jet.ddg(b, a, i, j) = jet.ddg(b, a, j, i) = v2;
          if (order < 3) continue;
          for (int c = b; c < d; ++c) {
            const double v3 = value(table[order_offset_[3] + (a * d + b) * d + c]);
            const std::array<std::array<int, 3>, 6> perms{{{a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}}};
            for (const auto& p : perms) {
              jet.dddg(p[0], p[1], p[2], i, j) = v3;
              jet.dddg(p[0], p[1], p[2], j, i) = v3;
            }
          }
        }
      }
    }

  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      jet.J(i, j) = value(spec_.J_at(i, j));
      for (int a = 0; a < d; ++a) jet.dJ(a, i, j) = value(structure_derivative(i, j, a));
    }
  return jet;
}

void Chart::check_point(std::span<const double> point, double tol) const {
  const PointJet j = jet(point, 1);
  const int d = dim();
  Eigen::MatrixXd g(d, d);
  Eigen::MatrixXd J(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      g(a, b) = j.g(a, b);
      J(a, b) = j.J(a, b);
    }
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) {
    throw ChartDomainError("chart '" + name() + "': metric not positive definite at point");
  }
  const double scale = std::max(1.0, J.cwiseAbs().maxCoeff());
  const double j2 = (J * J + Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
  if (j2 > tol * scale * scale) {
    throw ChartDomainError("chart '" + name() + "': J^2 != -I at point (max deviation " + std::to_string(j2) + ")");
  }
  const double gscale = std::max(1.0, g.cwiseAbs().maxCoeff());
  const double compat = (J.transpose() * g * J - g).cwiseAbs().maxCoeff();
  if (compat > tol * gscale * scale * scale) {
    throw ChartDomainError("chart '" + name() + "': g(JX,JY) != g(X,Y) at point (max deviation " +
                           std::to_string(compat) + ")");
  }
}

}  // namespace tvb
