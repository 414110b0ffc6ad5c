#include "tvb/geometry.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace tvb {

namespace {

Tensor checked_inverse(const Tensor& g) {
  try {
    return inverse(g);
  } catch (const std::domain_error&) {
    throw ChartDomainError("metric is singular at point");
  }
}

}  // namespace

Christoffel christoffel(const PointJet& jet) {
  const int d = jet.dim();
  const Tensor gi = checked_inverse(jet.g);

  // First-kind symbols Γ_lij = ½(∂_i g_jl + ∂_j g_il - ∂_l g_ij) and their
  // derivatives, then raise with g^{-1} using the product rule and
  // ∂g^{-1} = -g^{-1} ∂g g^{-1}.
  Tensor g1 = Tensor::covariant(d, 3);
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) g1(l, i, j) = 0.5 * (jet.dg(i, j, l) + jet.dg(j, i, l) - jet.dg(l, i, j));

  Christoffel c;
  c.gamma = Tensor(d, {Variance::Contravariant, Variance::Covariant, Variance::Covariant});
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int l = 0; l < d; ++l) s += gi(k, l) * g1(l, i, j);
        c.gamma(k, i, j) = s;
      }

  if (jet.order < 2) return c;

  // dgi(a,k,l) = ∂_a g^{kl}
  Tensor dgi = Tensor::covariant(d, 3);
  for (int a = 0; a < d; ++a)
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l) {
        double s = 0.0;
        for (int m = 0; m < d; ++m)
          for (int n = 0; n < d; ++n) s -= gi(k, m) * jet.dg(a, m, n) * gi(n, l);
        dgi(a, k, l) = s;
      }

  Tensor dg1 = Tensor::covariant(d, 4);  // (a, l, i, j)
  for (int a = 0; a < d; ++a)
    for (int l = 0; l < d; ++l)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          dg1(a, l, i, j) = 0.5 * (jet.ddg(a, i, j, l) + jet.ddg(a, j, i, l) - jet.ddg(a, l, i, j));

  c.dgamma = Tensor(d, {Variance::Covariant, Variance::Contravariant, Variance::Covariant, Variance::Covariant});
  for (int a = 0; a < d; ++a)
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double s = 0.0;
          for (int l = 0; l < d; ++l) s += dgi(a, k, l) * g1(l, i, j) + gi(k, l) * dg1(a, l, i, j);
          c.dgamma(a, k, i, j) = s;
        }

  if (jet.order < 3) return c;

  // ∂_a∂_b g^{-1} = -(∂_a g^{-1}) ∂_b g g^{-1} - g^{-1} ∂_a∂_b g g^{-1} - g^{-1} ∂_b g ∂_a g^{-1}
  Tensor ddgi = Tensor::covariant(d, 4);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double s = 0.0;
          for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) {
              s -= dgi(a, k, m) * jet.dg(b, m, n) * gi(n, l);
              s -= gi(k, m) * jet.ddg(a, b, m, n) * gi(n, l);
              s -= gi(k, m) * jet.dg(b, m, n) * dgi(a, n, l);
            }
          ddgi(a, b, k, l) = s;
        }

  Tensor ddg1 = Tensor::covariant(d, 5);  // (a, b, l, i, j)
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int l = 0; l < d; ++l)
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            ddg1(a, b, l, i, j) =
                0.5 * (jet.dddg(a, b, i, j, l) + jet.dddg(a, b, j, i, l) - jet.dddg(a, b, l, i, j));

  c.ddgamma = Tensor(d, {Variance::Covariant, Variance::Covariant, Variance::Contravariant, Variance::Covariant,
                         Variance::Covariant});
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) {
            double s = 0.0;
            for (int l = 0; l < d; ++l) {
              s += ddgi(a, b, k, l) * g1(l, i, j) + dgi(a, k, l) * dg1(b, l, i, j) + dgi(b, k, l) * dg1(a, l, i, j) +
                   gi(k, l) * ddg1(a, b, l, i, j);
            }
            c.ddgamma(a, b, k, i, j) = s;
          }
  return c;
}

Christoffel christoffel(const Chart& chart, std::span<const double> point) {
  return christoffel(chart.jet(point, 2));
}

namespace {

// R^l_ijk = ∂_i Γ^l_jk - ∂_j Γ^l_ik + Γ^l_im Γ^m_jk - Γ^l_jm Γ^m_ik, at (l,i,j,k).
Tensor riemann_up(const Christoffel& c) {
  const int d = c.gamma.dim();
  const Tensor& G = c.gamma;
  const Tensor& dG = c.dgamma;
  Tensor r(d, {Variance::Contravariant, Variance::Covariant, Variance::Covariant, Variance::Covariant});
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          double s = dG(i, l, j, k) - dG(j, l, i, k);
          for (int m = 0; m < d; ++m) s += G(l, i, m) * G(m, j, k) - G(l, j, m) * G(m, i, k);
          r(l, i, j, k) = s;
        }
  return r;
}

}  // namespace

Tensor riemann(const PointJet& jet, const Christoffel& conn) {
  if (jet.order < 2) throw std::invalid_argument("riemann needs a jet of order >= 2");
  const int d = jet.dim();
  const Tensor up = riemann_up(conn);
  Tensor R = Tensor::covariant(d, 4);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double s = 0.0;
          for (int p = 0; p < d; ++p) s += jet.g(l, p) * up(p, i, j, k);
          R(i, j, k, l) = s;
        }
  return R;
}

Tensor riemann(const Chart& chart, std::span<const double> point) {
  const PointJet jet = chart.jet(point, 2);
  return riemann(jet, christoffel(jet));
}

RicciPair ricci_pair(const Tensor& R, const Tensor& g_inv, const Tensor& J) {
  const int d = R.dim();
  RicciPair out;
  out.ricci = Tensor::covariant(d, 2);
  out.ricci_star = Tensor::covariant(d, 2);
  // R^m_xpq = g^{ml} R_xpql.
  Tensor up(d, {Variance::Contravariant, Variance::Covariant, Variance::Covariant, Variance::Covariant});
  for (int m = 0; m < d; ++m)
    for (int x = 0; x < d; ++x)
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) {
          double s = 0.0;
          for (int l = 0; l < d; ++l) s += g_inv(m, l) * R(x, p, q, l);
          up(m, x, p, q) = s;
        }
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      // ρ(X,Y) = Σ_m dz^m(R(∂_m, X)Y)
      double r = 0.0;
      for (int m = 0; m < d; ++m) r += up(m, m, x, y);
      out.ricci(x, y) = r;
      // ρ*(X,Y) = Σ_m dz^m(R(X, J∂_m) JY)
      double rs = 0.0;
      for (int m = 0; m < d; ++m)
        for (int p = 0; p < d; ++p) {
          if (J(p, m) == 0.0) continue;
          for (int q = 0; q < d; ++q) rs += up(m, x, p, q) * J(p, m) * J(q, y);
        }
      out.ricci_star(x, y) = rs;
    }
  // g(QX,Y) = ρ(X,Y) ⇒ Q^i_j = g^{ik} ρ_jk.
  out.q = Tensor::mixed(d);
  out.q_star = Tensor::mixed(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double a = 0.0;
      double b = 0.0;
      for (int k = 0; k < d; ++k) {
        a += g_inv(i, k) * out.ricci(j, k);
        b += g_inv(i, k) * out.ricci_star(j, k);
      }
      out.q(i, j) = a;
      out.q_star(i, j) = b;
    }
  for (int i = 0; i < d; ++i) {
    out.tau += out.q(i, i);
    out.tau_star += out.q_star(i, i);
  }
  return out;
}

CurvatureData curvature_from_tensor(Tensor g, Tensor J, Tensor R) {
  CurvatureData cd;
  cd.g_inv = checked_inverse(g);
  RicciPair rp = ricci_pair(R, cd.g_inv, J);
  cd.g = std::move(g);
  cd.J = std::move(J);
  cd.riemann = std::move(R);
  cd.ricci = std::move(rp.ricci);
  cd.ricci_star = std::move(rp.ricci_star);
  cd.tau = rp.tau;
  cd.tau_star = rp.tau_star;
  cd.q = std::move(rp.q);
  cd.q_star = std::move(rp.q_star);
  return cd;
}

CurvatureData curvature(const PointJet& jet) {
  Christoffel conn = christoffel(jet);
  Tensor R = riemann(jet, conn);
  CurvatureData cd = curvature_from_tensor(jet.g, jet.J, std::move(R));
  cd.point = jet.point;
  cd.connection = std::move(conn);
  return cd;
}

CurvatureData curvature(const Chart& chart, std::span<const double> point) {
  return curvature(chart.jet(point, 2));
}

Tensor kahler_form(const Tensor& g, const Tensor& J) {
  const int d = g.dim();
  Tensor om = Tensor::covariant(d, 2);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += J(k, i) * g(k, j);
      om(i, j) = s;
    }
  return om;
}

Tensor nabla_J(const PointJet& jet, const Christoffel& conn) {
  const int d = jet.dim();
  const Tensor& G = conn.gamma;
  Tensor out = Tensor::covariant(d, 3);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      // (∇_i J)^k_j = ∂_i J^k_j + Γ^k_im J^m_j - Γ^m_ij J^k_m
      std::vector<double> col(d, 0.0);
      for (int k = 0; k < d; ++k) {
        double s = jet.dJ(i, k, j);
        for (int m = 0; m < d; ++m) s += G(k, i, m) * jet.J(m, j) - G(m, i, j) * jet.J(k, m);
        col[k] = s;
      }
      for (int k = 0; k < d; ++k) {
        double s = 0.0;
        for (int l = 0; l < d; ++l) s += jet.g(k, l) * col[l];
        out(i, j, k) = s;
      }
    }
  return out;
}

Tensor nijenhuis(const PointJet& jet) {
  const int d = jet.dim();
  const Tensor& J = jet.J;
  const Tensor& dJ = jet.dJ;  // dJ(a, i, j) = ∂_a J^i_j
  Tensor N(d, {Variance::Contravariant, Variance::Covariant, Variance::Covariant});
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int m = 0; m < d; ++m) {
          s += J(m, i) * dJ(m, k, j) - J(m, j) * dJ(m, k, i);
          s += J(k, m) * dJ(j, m, i) - J(k, m) * dJ(i, m, j);
        }
        N(k, i, j) = s;
      }
  return N;
}

Tensor d_omega(const PointJet& jet) {
  const int d = jet.dim();
  // ∂_a Ω_ij = ∂_a J^k_i g_kj + J^k_i ∂_a g_kj
  Tensor dom = Tensor::covariant(d, 3);
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int k = 0; k < d; ++k) s += jet.dJ(a, k, i) * jet.g(k, j) + jet.J(k, i) * jet.dg(a, k, j);
        dom(a, i, j) = s;
      }
  Tensor out = Tensor::covariant(d, 3);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) out(i, j, k) = dom(i, j, k) + dom(j, k, i) + dom(k, i, j);
  return out;
}

Tensor nabla_g(const PointJet& jet, const Christoffel& conn) {
  const int d = jet.dim();
  const Tensor& G = conn.gamma;
  Tensor out = Tensor::covariant(d, 3);
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double s = jet.dg(a, i, j);
        for (int m = 0; m < d; ++m) s -= G(m, a, i) * jet.g(m, j) + G(m, a, j) * jet.g(i, m);
        out(a, i, j) = s;
      }
  return out;
}

Tensor nabla_R(const PointJet& jet, const Christoffel& conn, const Tensor& R) {
  if (jet.order < 3 || conn.ddgamma.size() == 0) throw std::invalid_argument("nabla_R needs a jet of order 3");
  const int d = jet.dim();
  const Tensor& G = conn.gamma;
  const Tensor& dG = conn.dgamma;
  const Tensor& ddG = conn.ddgamma;

  // ∂_m R^l_ijk, then ∂_m R_ijkl = ∂_m g_lp R^p_ijk + g_lp ∂_m R^p_ijk.
  const Tensor up = riemann_up(conn);
  Tensor dR = Tensor::covariant(d, 5);  // (m, i, j, k, l)
  std::vector<double> dup(d);
  for (int m = 0; m < d; ++m)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          for (int p = 0; p < d; ++p) {
            double s = ddG(m, i, p, j, k) - ddG(m, j, p, i, k);
            for (int q = 0; q < d; ++q) {
              s += dG(m, p, i, q) * G(q, j, k) + G(p, i, q) * dG(m, q, j, k);
              s -= dG(m, p, j, q) * G(q, i, k) + G(p, j, q) * dG(m, q, i, k);
            }
            dup[p] = s;
          }
          for (int l = 0; l < d; ++l) {
            double s = 0.0;
            for (int p = 0; p < d; ++p) s += jet.dg(m, l, p) * up(p, i, j, k) + jet.g(l, p) * dup[p];
            dR(m, i, j, k, l) = s;
          }
        }

  Tensor out = Tensor::covariant(d, 5);
  for (int m = 0; m < d; ++m)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) {
            double s = dR(m, i, j, k, l);
            for (int p = 0; p < d; ++p) {
              s -= G(p, m, i) * R(p, j, k, l) + G(p, m, j) * R(i, p, k, l) + G(p, m, k) * R(i, j, p, l) +
                   G(p, m, l) * R(i, j, k, p);
            }
            out(m, i, j, k, l) = s;
          }
  return out;
}

Tensor second_bianchi(const Tensor& nr) {
  const int d = nr.dim();
  Tensor out = Tensor::covariant(d, 5);
  for (int m = 0; m < d; ++m)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) out(m, i, j, k, l) = nr(m, i, j, k, l) + nr(i, j, m, k, l) + nr(j, m, i, k, l);
  return out;
}

namespace {

double inner(const Tensor& g, std::span<const double> u, std::span<const double> v) { return pair(g, u, v); }

}  // namespace

Tensor adapted_frame(const Tensor& g, const Tensor& J) {
  const int d = g.dim();
  {
    Eigen::MatrixXd m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = g(i, j);
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) throw std::domain_error("adapted_frame: metric not positive definite");
  }
  std::vector<std::vector<double>> vecs;
  for (int seed = 0; seed < d && static_cast<int>(vecs.size()) < d; ++seed) {
    std::vector<double> v(d, 0.0);
    v[seed] = 1.0;
    const double seed_norm = std::sqrt(inner(g, v, v));
    // Two passes of modified Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& e : vecs) {
        const double c = inner(g, v, e);
        for (int i = 0; i < d; ++i) v[i] -= c * e[i];
      }
    }
    const double r = std::sqrt(std::max(0.0, inner(g, v, v)));
    if (r < 1e-8 * seed_norm) continue;
    for (double& x : v) x /= r;
    std::vector<double> jv = tvb::apply(J, v);
    vecs.push_back(v);
    vecs.push_back(std::move(jv));
  }
  if (static_cast<int>(vecs.size()) != d) throw std::domain_error("adapted_frame: Gram-Schmidt breakdown");
  Tensor frame = Tensor::mixed(d);
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < d; ++i) frame(i, a) = vecs[a][i];
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const double want = a == b ? 1.0 : 0.0;
      if (std::abs(inner(g, vecs[a], vecs[b]) - want) > 1e-8) {
        throw std::domain_error("adapted_frame: frame not orthonormal; is J compatible with g?");
      }
    }
  return frame;
}

double eval4(const Tensor& R, std::span<const double> x, std::span<const double> y, std::span<const double> z,
             std::span<const double> w) {
  const int d = R.dim();
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < d; ++j) {
      if (y[j] == 0.0) continue;
      for (int k = 0; k < d; ++k) {
        if (z[k] == 0.0) continue;
        for (int l = 0; l < d; ++l) s += R(i, j, k, l) * x[i] * y[j] * z[k] * w[l];
      }
    }
  }
  return s;
}

double sectional_curvature(const Tensor& R, const Tensor& g, std::span<const double> x,
                           std::span<const double> y) {
  const double den = inner(g, x, x) * inner(g, y, y) - std::pow(inner(g, x, y), 2);
  if (!(den > 0.0)) throw std::invalid_argument("sectional_curvature: degenerate plane");
  return eval4(R, x, y, y, x) / den;
}

double hol_sect_curv(const Tensor& R, const Tensor& g, const Tensor& J, std::span<const double> x) {
  const double xx = inner(g, x, x);
  if (!(xx > 0.0)) throw std::invalid_argument("hol_sect_curv: zero vector");
  const std::vector<double> jx = tvb::apply(J, x);
  return eval4(R, x, jx, jx, x) / (xx * xx);
}

}  // namespace tvb
