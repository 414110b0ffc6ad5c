#include "tvb/bochner.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace tvb {

namespace {

void require_surface(const CurvatureData& cd, const char* op) {
  if (cd.dim() != 4) {
    throw std::invalid_argument(std::string(op) + " needs real dimension 4, got " + std::to_string(cd.dim()));
  }
}

double rel_scale(double magnitude) { return std::max(1.0, std::abs(magnitude)); }

// g(X, JY) as a (0,2) tensor.
Tensor g_J(const Tensor& g, const Tensor& J) { return bar(g, J); }

}  // namespace

FrameData to_adapted_frame(const CurvatureData& cd) {
  FrameData fd;
  fd.frame = adapted_frame(cd.g, cd.J);
  fd.frame_inv = inverse(fd.frame);
  fd.J = to_frame(cd.J, fd.frame, fd.frame_inv);
  fd.riemann = to_frame(cd.riemann, fd.frame, fd.frame_inv);
  fd.ricci = to_frame(cd.ricci, fd.frame, fd.frame_inv);
  fd.ricci_star = to_frame(cd.ricci_star, fd.frame, fd.frame_inv);
  return fd;
}

// ---------------------------------------------------------------------------

Tensor bochner_tensor(const CurvatureData& cd, int n) {
  if (n < 2) throw std::invalid_argument("bochner_tensor: n must be >= 2, got " + std::to_string(n));
  if (cd.dim() != 2 * n) {
    throw std::invalid_argument("bochner_tensor: n = " + std::to_string(n) + " does not match real dimension " +
                                std::to_string(cd.dim()));
  }
  return n == 2 ? bochner_tensor_surface(cd) : bochner_tensor_higher(cd, n);
}

Tensor bochner_tensor_surface(const CurvatureData& cd) {
  require_surface(cd, "bochner_tensor_surface");
  const Tensor& g = cd.g;
  const Tensor& J = cd.J;
  const Tensor& rs = cd.ricci_star;
  const Tensor rsJ = twist(rs, J);
  const double t = cd.tau;
  const double ts = cd.tau_star;

  Tensor B = cd.riemann;
  B += 0.5 * kulkarni(g, cd.ricci);
  Tensor brace = triangle(g, rs, J);
  brace -= kulkarni(g, rs);
  brace -= triangle(g, rsJ, J);
  brace += kulkarni(g, rsJ);
  B += (1.0 / 12.0) * brace;
  B += ((3.0 * ts - t) / 96.0) * triangle(g, g, J);
  B -= ((t + ts) / 16.0) * kulkarni(g, g);
  return B;
}

Tensor bochner_tensor_higher(const CurvatureData& cd, int n) {
  if (n == 2) {
    throw std::invalid_argument(
        "bochner_tensor_higher: branch mismatch, the n >= 3 formula has (n-2) denominators; use the n = 2 branch");
  }
  if (n < 3) throw std::invalid_argument("bochner_tensor_higher: n must be >= 3");
  if (cd.dim() != 2 * n) throw std::invalid_argument("bochner_tensor_higher: n does not match the data dimension");
  const Tensor& g = cd.g;
  const Tensor& J = cd.J;
  const Tensor& rho = cd.ricci;
  const Tensor& rs = cd.ricci_star;
  const Tensor rhoJ = twist(rho, J);
  const Tensor rsJ = twist(rs, J);
  const double t = cd.tau;
  const double ts = cd.tau_star;
  const double nn = n;

  Tensor B = cd.riemann;
  B -= (1.0 / (4 * (nn + 2) * (nn - 2))) * triangle(g, rho, J);
  B += ((2 * nn - 3) / (4 * (nn - 1) * (nn - 2))) * kulkarni(g, rho);
  B -= (1.0 / (4 * (nn + 2) * (nn - 2))) * triangle(g, rhoJ, J);
  B += (1.0 / (4 * (nn - 1) * (nn - 2))) * kulkarni(g, rhoJ);
  B += ((2 * nn * nn - 5) / (4 * (nn + 1) * (nn + 2) * (nn - 2))) * triangle(g, rs, J);
  B -= ((2 * nn - 1) / (4 * (nn + 1) * (nn - 2))) * kulkarni(g, rs);
  B += (3.0 / (4 * (nn + 1) * (nn + 2) * (nn - 2))) * triangle(g, rsJ, J);
  B -= (3.0 / (4 * (nn + 1) * (nn - 2))) * kulkarni(g, rsJ);
  B += ((3 * nn * t - (2 * nn * nn - 3 * nn + 4) * ts) / (16 * (nn + 1) * (nn + 2) * (nn - 1) * (nn - 2))) *
       triangle(g, g, J);
  B -= ((t - ts) / (8 * (nn - 1) * (nn - 2))) * kulkarni(g, g);
  return B;
}

Tensor weyl_tensor(const CurvatureData& cd) {
  const double m = cd.dim();  // 2n
  Tensor W = cd.riemann;
  W += (1.0 / (m - 2)) * kulkarni(cd.g, cd.ricci);
  W -= (cd.tau / (2 * (m - 1) * (m - 2))) * kulkarni(cd.g, cd.g);
  return W;
}

namespace {

// The J-twisted ρ* block shared by the reconstruction and the closed-form
// Weyl tensor:
// (1/12){2g(X,JY)a(W,Z) + 2g(Z,JW)a(Y,X) + g(X,JZ)a(W,Y) + g(Y,JW)a(Z,X)
//        + g(X,JW)a(Y,Z) + g(Y,JZ)a(X,W)},  a(P,Q) = ρ*(P,JQ) - ρ*(JQ,P).
// Also returns the bracket multiplying (3τ*-τ)/48.
struct SurfaceBlocks {
  Tensor rho_star_block;
  Tensor hermitian_block;
  Tensor metric_block;  // g(X,W)g(Y,Z) - g(X,Z)g(Y,W)
};

SurfaceBlocks surface_blocks(const Tensor& rho_star, const Tensor& g, const Tensor& J) {
  const int d = g.dim();
  const Tensor gJ = g_J(g, J);
  Tensor a = Tensor::covariant(d, 2);
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += rho_star(p, k) * J(k, q) - J(k, q) * rho_star(k, p);
      a(p, q) = s;
    }
  SurfaceBlocks b{Tensor::covariant(d, 4), Tensor::covariant(d, 4), Tensor::covariant(d, 4)};
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z)
        for (int w = 0; w < d; ++w) {
          b.rho_star_block(x, y, z, w) =
              (2 * gJ(x, y) * a(w, z) + 2 * gJ(z, w) * a(y, x) + gJ(x, z) * a(w, y) + gJ(y, w) * a(z, x) +
               gJ(x, w) * a(y, z) + gJ(y, z) * a(x, w)) /
              12.0;
          const double m = g(x, w) * g(y, z) - g(x, z) * g(y, w);
          b.metric_block(x, y, z, w) = m;
          b.hermitian_block(x, y, z, w) =
              m - 2 * gJ(x, y) * gJ(z, w) - gJ(x, z) * gJ(y, w) + gJ(y, z) * gJ(x, w);
        }
  return b;
}

}  // namespace

Tensor weyl_closed_form(const CurvatureData& cd) {
  require_surface(cd, "weyl_closed_form");
  const double t = cd.tau;
  const double ts = cd.tau_star;
  SurfaceBlocks b = surface_blocks(cd.ricci_star, cd.g, cd.J);
  Tensor W = ((t - 3 * ts) / 24.0) * b.metric_block;
  W += b.rho_star_block;
  W += ((3 * ts - t) / 48.0) * b.hermitian_block;
  return W;
}

Tensor reconstruct_R(const Tensor& rho, const Tensor& rho_star, double tau, double tau_star, const Tensor& g,
                     const Tensor& J, double tol) {
  const int d = g.dim();
  if (d != 4) throw std::invalid_argument("reconstruct_R needs real dimension 4");
  const double scale = std::max({1.0, rho.max_abs(), rho_star.max_abs()});
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      if (std::abs(rho(x, y) - rho(y, x)) > tol * scale) {
        throw std::invalid_argument("reconstruct_R: Ricci tensor is not symmetric");
      }
    }
  const Tensor swapped = twist(rho_star, J);  // ρ*(JX,JY), must equal ρ*(Y,X)
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      if (std::abs(swapped(x, y) - rho_star(y, x)) > tol * scale) {
        throw std::invalid_argument("reconstruct_R: rho* violates rho*(X,Y) = rho*(JY,JX)");
      }
    }

  SurfaceBlocks b = surface_blocks(rho_star, g, J);
  Tensor R = Tensor::covariant(d, 4);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z)
        for (int w = 0; w < d; ++w) {
          R(x, y, z, w) =
              0.5 * (g(x, w) * rho(y, z) + g(y, z) * rho(x, w) - g(x, z) * rho(y, w) - g(y, w) * rho(x, z));
        }
  R += b.rho_star_block;
  R += ((3 * tau_star - tau) / 48.0) * b.hermitian_block;
  R -= ((tau + tau_star) / 8.0) * b.metric_block;
  return R;
}

// ---------------------------------------------------------------------------
// Λ²

Lambda2Basis lambda2_basis(const Tensor& frame, const Tensor& J, double tol) {
  if (frame.dim() != 4) throw std::invalid_argument("lambda2_basis needs real dimension 4");
  const int d = 4;
  for (int pair = 0; pair < 2; ++pair) {
    const int a = 2 * pair;
    std::vector<double> ea(d);
    for (int i = 0; i < d; ++i) ea[i] = frame(i, a);
    const std::vector<double> jea = tvb::apply(J, ea);
    for (int i = 0; i < d; ++i) {
      if (std::abs(jea[i] - frame(i, a + 1)) > tol * rel_scale(jea[i])) {
        throw ContractViolation("lambda2_basis: frame is not adapted (e" + std::to_string(a + 2) + " != J e" +
                                std::to_string(a + 1) + ")");
      }
    }
  }
  const double s = 1.0 / std::numbers::sqrt2;
  const auto form = [&](std::initializer_list<std::array<double, 3>> entries) {
    Tensor f = Tensor::covariant(d, 2);
    for (const auto& e : entries) {
      const int i = static_cast<int>(e[0]);
      const int j = static_cast<int>(e[1]);
      f(i, j) += e[2] * s;
      f(j, i) -= e[2] * s;
    }
    return f;
  };
  Lambda2Basis b;
  b.frame = frame;
  b.forms[0] = form({{0, 1, 1}, {2, 3, 1}});   // Ω₀ = (e¹∧e² + e³∧e⁴)/√2
  b.forms[1] = form({{0, 2, 1}, {1, 3, -1}});  // Φ  = (e¹∧e³ - e²∧e⁴)/√2
  b.forms[2] = form({{0, 3, 1}, {1, 2, 1}});   // JΦ = (e¹∧e⁴ + e²∧e³)/√2
  b.forms[3] = form({{0, 1, 1}, {2, 3, -1}});  // Ψ₁
  b.forms[4] = form({{0, 2, 1}, {1, 3, 1}});   // Ψ₂
  b.forms[5] = form({{0, 3, 1}, {1, 2, -1}});  // Ψ₃
  return b;
}

double form_inner(const Tensor& a, const Tensor& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.data()[i] * b.data()[i];
  return 0.5 * s;
}

WeylBlocks weyl_operator(const Tensor& W, const Tensor& g_inv, const Lambda2Basis& basis, double tol) {
  if (W.dim() != 4) throw std::invalid_argument("weyl_operator needs real dimension 4");
  const Tensor trace = contract(W, 0, 3, &g_inv);
  double wmax = W.max_abs();
  if (trace.max_abs() > tol * rel_scale(wmax)) {
    throw ContractViolation("weyl_operator: input is not trace-free (max trace " + std::to_string(trace.max_abs()) +
                            ")");
  }
  const Tensor frame_inv = inverse(basis.frame);
  const Tensor Wf = to_frame(W, basis.frame, frame_inv);
  WeylBlocks out;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      const Tensor& fa = basis.forms[a];
      const Tensor& fb = basis.forms[b];
      double s = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          if (fa(i, j) == 0.0) continue;
          for (int k = 0; k < 4; ++k)
            for (int l = 0; l < 4; ++l) s += fa(i, j) * fb(k, l) * Wf(i, j, k, l);
        }
      out.matrix[a][b] = -0.25 * s;
    }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      out.w_plus[a][b] = out.matrix[a][b];
      out.w_minus[a][b] = out.matrix[a + 3][b + 3];
      out.off_diagonal[a][b] = out.matrix[a][b + 3];
    }
  return out;
}

Mat6 weyl_operator_closed_form(double tau, double tau_star, const Tensor& rsf) {
  const double s = 3 * tau_star - tau;
  const double a13 = rsf(0, 2) - rsf(2, 0);
  const double a14 = rsf(0, 3) - rsf(3, 0);
  Mat6 m{};
  m[0][0] = s / 12.0;
  m[0][1] = m[1][0] = -0.5 * a14;
  m[0][2] = m[2][0] = 0.5 * a13;
  m[1][1] = -s / 24.0;
  m[2][2] = -s / 24.0;
  return m;
}

WeylNorms wpm_norms(const WeylBlocks& blocks) {
  WeylNorms n;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      n.plus_sq += blocks.w_plus[a][b] * blocks.w_plus[a][b];
      n.minus_sq += blocks.w_minus[a][b] * blocks.w_minus[a][b];
    }
  return n;
}

double w_plus_sq_closed_form(double tau, double tau_star, const Tensor& rsf) {
  const double s = 3 * tau_star - tau;
  const double a13 = rsf(0, 2) - rsf(2, 0);
  const double a14 = rsf(0, 3) - rsf(3, 0);
  return s * s / 96.0 + 0.5 * (a13 * a13 + a14 * a14);
}

GQuantity g_quantity(const Tensor& rsf, double tol) {
  if (rsf.dim() != 4) throw std::invalid_argument("g_quantity needs real dimension 4");
  GQuantity q;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double a = rsf(i, j) - rsf(j, i);
      q.full_sum += a * a;
    }
  const double a13 = rsf(0, 2) - rsf(2, 0);
  const double a14 = rsf(0, 3) - rsf(3, 0);
  q.closed_form = 4.0 * (a13 * a13 + a14 * a14);
  if (std::abs(q.full_sum - q.closed_form) > tol * rel_scale(q.full_sum)) {
    throw ContractViolation("g_quantity: the two expressions for G disagree (" + std::to_string(q.full_sum) +
                            " vs " + std::to_string(q.closed_form) + "); rho* is not of almost Hermitian type");
  }
  return q;
}

namespace {

double traceless_ricci_sq(const CurvatureData& cd) {
  Tensor t = cd.ricci;
  t -= (cd.tau / cd.dim()) * cd.g;
  return norm_sq(t, cd.g, cd.g_inv);
}

}  // namespace

CharacteristicDensities characteristic_integrands(const CurvatureData& cd, const WeylBlocks& blocks, double G) {
  require_surface(cd, "characteristic_integrands");
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  const WeylNorms wn = wpm_norms(blocks);
  const double t = cd.tau;
  const double s = 3 * cd.tau_star - t;
  const double r2 = norm_sq(cd.riemann, cd.g, cd.g_inv);
  const double rho2 = norm_sq(cd.ricci, cd.g, cd.g_inv);
  const double e2 = traceless_ricci_sq(cd);

  CharacteristicDensities out;
  out.p1 = (wn.plus_sq - wn.minus_sq) / (4 * pi2);
  out.chi = (r2 - 4 * rho2 + t * t) / (32 * pi2);
  out.c1sq = out.p1 + 2 * out.chi;
  out.p1_bochner_flat = (s * s / 12.0 + G) / (32 * pi2);
  out.chi_bochner_flat = (s * s / 24.0 - 2 * e2 + t * t / 6.0 + G / 2.0) / (32 * pi2);
  out.c1sq_bochner_flat = (s * s / 6.0 - 4 * e2 + t * t / 3.0 + 2 * G) / (32 * pi2);
  return out;
}

Uvwh uvwh(const FrameData& fd) {
  if (fd.riemann.dim() != 4) throw std::invalid_argument("uvwh needs real dimension 4");
  const Tensor& R = fd.riemann;
  Uvwh q;
  q.u = -R(0, 2, 0, 2) + R(0, 2, 1, 3);
  q.v = -R(0, 3, 0, 3) - R(0, 3, 1, 2);
  q.w = -R(0, 2, 0, 3) - R(0, 2, 1, 2);
  q.h = (q.u - q.v) * (q.u - q.v) - 4 * q.w * q.w;
  return q;
}

NormDecomposition curvature_norm_decomposition(const CurvatureData& cd, double G, double tol) {
  require_surface(cd, "curvature_norm_decomposition");
  const double r2 = norm_sq(cd.riemann, cd.g, cd.g_inv);
  const double b = norm(bochner_tensor_surface(cd), cd.g, cd.g_inv);
  if (b > tol * rel_scale(std::sqrt(r2))) {
    throw ContractViolation("curvature_norm_decomposition: data is not Bochner-flat (|B(R)| = " + std::to_string(b) +
                            ")");
  }
  const double t = cd.tau;
  const double s = 3 * cd.tau_star - t;
  NormDecomposition nd;
  nd.lhs = r2;
  nd.rhs = s * s / 24.0 + 2 * traceless_ricci_sq(cd) + t * t / 6.0 + G / 2.0;
  return nd;
}

namespace {

// Apply J to the frame slots listed in `mask` (bit k = slot k).
Tensor j_slots(const Tensor& R, const Tensor& J, unsigned mask) {
  Tensor out = R;
  const int d = R.dim();
  std::vector<int> idx(4);
  for (int slot = 0; slot < 4; ++slot) {
    if (!(mask & (1u << slot))) continue;
    Tensor next = Tensor::covariant(d, 4);
    for (std::size_t off = 0; off < next.size(); ++off) {
      next.unflatten(off, idx);
      const int x = idx[slot];
      double s = 0.0;
      for (int p = 0; p < d; ++p) {
        // (J e_x) = Σ_p J^p_x e_p
        const double c = J(p, x);
        if (c == 0.0) continue;
        idx[slot] = p;
        s += c * out.at(idx);
      }
      next.data()[off] = s;
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

double gray_identity_residual(const FrameData& fd) {
  const Tensor& R = fd.riemann;
  const Tensor& J = fd.J;
  constexpr unsigned X = 1, Y = 2, Z = 4, W = 8;
  Tensor lhs = R;
  lhs -= j_slots(R, J, X | Y);
  lhs -= j_slots(R, J, Z | W);
  lhs += j_slots(R, J, X | Y | Z | W);
  Tensor rhs = j_slots(R, J, Y | W);
  rhs += j_slots(R, J, Y | Z);
  rhs += j_slots(R, J, X | Z);
  rhs += j_slots(R, J, X | W);
  return (lhs - rhs).max_abs();
}

Tensor complex_space_form_tensor(const Tensor& g, const Tensor& J, double c) {
  const int d = g.dim();
  const Tensor om = kahler_form(g, J);  // Ω(X,Y) = g(JX,Y)
  Tensor R = Tensor::covariant(d, 4);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z)
        for (int w = 0; w < d; ++w) {
          R(x, y, z, w) = 0.25 * c *
                          (g(y, z) * g(x, w) - g(x, z) * g(y, w) + om(y, z) * om(x, w) - om(x, z) * om(y, w) +
                           2 * om(y, x) * om(z, w));
        }
  return R;
}

}  // namespace tvb
