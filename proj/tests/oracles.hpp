// Brute-force reference implementations used only by the tests. Nothing here
// calls the library's tensor algebra or symbolic derivatives.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "tvb/catalog.hpp"
#include "tvb/chart.hpp"
#include "tvb/tensor.hpp"

namespace oracle {

using Vec = std::vector<double>;

// Dense arrays indexed row-major, like tvb::Tensor.
struct Arr {
  int d = 0;
  int rank = 0;
  Vec v;

  Arr() = default;
  Arr(int dim, int r) : d(dim), rank(r), v(static_cast<std::size_t>(std::pow(dim, r)), 0.0) {}

  double& operator()(int a, int b) { return v[static_cast<std::size_t>(a * d + b)]; }
  double operator()(int a, int b) const { return v[static_cast<std::size_t>(a * d + b)]; }
  double& operator()(int a, int b, int c) { return v[static_cast<std::size_t>((a * d + b) * d + c)]; }
  double operator()(int a, int b, int c) const { return v[static_cast<std::size_t>((a * d + b) * d + c)]; }
  double& operator()(int a, int b, int c, int e) { return v[static_cast<std::size_t>(((a * d + b) * d + c) * d + e)]; }
  double operator()(int a, int b, int c, int e) const {
    return v[static_cast<std::size_t>(((a * d + b) * d + c) * d + e)];
  }
};

inline Arr from(const tvb::Tensor& t) {
  Arr a(t.dim(), t.rank());
  for (std::size_t i = 0; i < t.size(); ++i) a.v[i] = t.data()[i];
  return a;
}

inline double max_diff(const tvb::Tensor& t, const Arr& a) {
  if (t.size() != a.v.size()) throw std::logic_error("oracle: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) m = std::max(m, std::abs(t.data()[i] - a.v[i]));
  return m;
}

inline double max_abs(const Arr& a) {
  double m = 0.0;
  for (double x : a.v) m = std::max(m, std::abs(x));
  return m;
}

// ---------------------------------------------------------------------------
// Random inputs

inline tvb::Tensor random_covariant(std::mt19937_64& rng, int d, int rank, bool symmetric = false) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  tvb::Tensor t = tvb::Tensor::covariant(d, rank);
  for (double& x : t.data()) x = u(rng);
  if (symmetric && rank == 2) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < i; ++j) t(i, j) = t(j, i);
  }
  return t;
}

/// Random positive definite metric and a compatible J = P J0 P⁻¹, with P the
/// Cholesky-type factor mapping an orthonormal basis to one of g.
struct Hermitian {
  tvb::Tensor g;
  tvb::Tensor J;
};

inline Vec mat_inverse(const Vec& m, int d) {
  Vec a = m;
  Vec inv(static_cast<std::size_t>(d * d), 0.0);
  for (int i = 0; i < d; ++i) inv[static_cast<std::size_t>(i * d + i)] = 1.0;
  for (int c = 0; c < d; ++c) {
    int p = c;
    for (int r = c + 1; r < d; ++r)
      if (std::abs(a[static_cast<std::size_t>(r * d + c)]) > std::abs(a[static_cast<std::size_t>(p * d + c)])) p = r;
    if (std::abs(a[static_cast<std::size_t>(p * d + c)]) < 1e-300) throw std::domain_error("oracle: singular");
    for (int k = 0; k < d; ++k) {
      std::swap(a[static_cast<std::size_t>(c * d + k)], a[static_cast<std::size_t>(p * d + k)]);
      std::swap(inv[static_cast<std::size_t>(c * d + k)], inv[static_cast<std::size_t>(p * d + k)]);
    }
    const double piv = a[static_cast<std::size_t>(c * d + c)];
    for (int k = 0; k < d; ++k) {
      a[static_cast<std::size_t>(c * d + k)] /= piv;
      inv[static_cast<std::size_t>(c * d + k)] /= piv;
    }
    for (int r = 0; r < d; ++r) {
      if (r == c) continue;
      const double f = a[static_cast<std::size_t>(r * d + c)];
      if (f == 0.0) continue;
      for (int k = 0; k < d; ++k) {
        a[static_cast<std::size_t>(r * d + k)] -= f * a[static_cast<std::size_t>(c * d + k)];
        inv[static_cast<std::size_t>(r * d + k)] -= f * inv[static_cast<std::size_t>(c * d + k)];
      }
    }
  }
  return inv;
}

inline Hermitian random_hermitian(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  // Columns of P are the new basis vectors; g = P⁻ᵀ P⁻¹ makes them orthonormal.
  Vec P(static_cast<std::size_t>(d * d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) P[static_cast<std::size_t>(i * d + j)] = (i == j ? 1.0 : 0.0) + u(rng);
  const Vec Pi = mat_inverse(P, d);
  Hermitian h{tvb::Tensor::covariant(d, 2), tvb::Tensor::mixed(d)};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += Pi[static_cast<std::size_t>(k * d + i)] * Pi[static_cast<std::size_t>(k * d + j)];
      h.g(i, j) = s;
    }
  Vec J0(static_cast<std::size_t>(d * d), 0.0);
  for (int k = 0; 2 * k + 1 < d; ++k) {
    J0[static_cast<std::size_t>((2 * k + 1) * d + 2 * k)] = 1.0;
    J0[static_cast<std::size_t>(2 * k * d + 2 * k + 1)] = -1.0;
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          s += P[static_cast<std::size_t>(i * d + a)] * J0[static_cast<std::size_t>(a * d + b)] *
               Pi[static_cast<std::size_t>(b * d + j)];
      h.J(i, j) = s;
    }
  return h;
}

// ---------------------------------------------------------------------------
// Loop oracles for the tensor products, straight from their definitions.

inline Arr kulkarni(const Arr& a, const Arr& b) {
  const int d = a.d;
  Arr out(d, 4);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z)
        for (int w = 0; w < d; ++w)
          out(x, y, z, w) = a(x, z) * b(y, w) - a(x, w) * b(y, z) + b(x, z) * a(y, w) - b(x, w) * a(y, z);
  return out;
}

// ā(x,y) = a(x, Jy) = Σ_k a(x,k) J^k_y
inline Arr bar(const Arr& a, const Arr& J) {
  const int d = a.d;
  Arr out(d, 2);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int k = 0; k < d; ++k) out(x, y) += a(x, k) * J(k, y);
  return out;
}

inline Arr twist(const Arr& a, const Arr& J) {
  const int d = a.d;
  Arr out(d, 2);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) out(x, y) += J(k, x) * a(k, l) * J(l, y);
  return out;
}

inline Arr triangle(const Arr& a, const Arr& b, const Arr& J) {
  const int d = a.d;
  const Arr ab = bar(a, J);
  const Arr bb = bar(b, J);
  Arr out(d, 4);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z)
        for (int w = 0; w < d; ++w) {
          double s = a(x, z) * b(y, w) - a(x, w) * b(y, z) + b(x, z) * a(y, w) - b(x, w) * a(y, z);
          s += ab(x, z) * bb(y, w) - ab(x, w) * bb(y, z) + bb(x, z) * ab(y, w) - bb(x, w) * ab(y, z);
          s += 2 * ab(x, y) * bb(z, w) + 2 * bb(x, y) * ab(z, w);
          out(x, y, z, w) = s;
        }
  return out;
}

// T(i,j,k,l) g^{il}
inline Arr contract_03(const Arr& t, const Arr& ginv) {
  const int d = t.d;
  Arr out(d, 2);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int l = 0; l < d; ++l) out(j, k) += t(i, j, k, l) * ginv(i, l);
  return out;
}

inline double norm_sq4(const Arr& t, const Arr& ginv) {
  const int d = t.d;
  double s = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e)
          for (int p = 0; p < d; ++p)
            for (int q = 0; q < d; ++q)
              for (int r = 0; r < d; ++r)
                for (int s2 = 0; s2 < d; ++s2)
                  s += t(a, b, c, e) * t(p, q, r, s2) * ginv(a, p) * ginv(b, q) * ginv(c, r) * ginv(e, s2);
  return s;
}

// T_f(a,b,c,e) = T(i,j,k,l) E^i_a E^j_b E^k_c E^l_e
inline Arr to_frame4(const Arr& t, const Arr& E) {
  const int d = t.d;
  Arr out(d, 4);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          double s = 0.0;
          for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
              for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) s += t(i, j, k, l) * E(i, a) * E(j, b) * E(k, c) * E(l, e);
          out(a, b, c, e) = s;
        }
  return out;
}

// ---------------------------------------------------------------------------
// Finite-difference geometry. Only metric values are taken from the chart.

inline Arr metric_at(const tvb::Chart& chart, std::span<const double> p) {
  const int d = chart.dim();
  Arr g(d, 2);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = chart.spec().g_at(i, j).eval(p);
  return g;
}

/// Γ^k_ij at (k,i,j) from central differences of g with step h.
inline Arr fd_christoffel(const tvb::Chart& chart, std::span<const double> p, double h = 1e-5) {
  const int d = chart.dim();
  Arr dg(d, 3);  // (a,i,j) = ∂_a g_ij
  Vec q(p.begin(), p.end());
  for (int a = 0; a < d; ++a) {
    q[static_cast<std::size_t>(a)] = p[static_cast<std::size_t>(a)] + h;
    const Arr gp = metric_at(chart, q);
    q[static_cast<std::size_t>(a)] = p[static_cast<std::size_t>(a)] - h;
    const Arr gm = metric_at(chart, q);
    q[static_cast<std::size_t>(a)] = p[static_cast<std::size_t>(a)];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) dg(a, i, j) = (gp(i, j) - gm(i, j)) / (2 * h);
  }
  const Arr g = metric_at(chart, p);
  Arr ginv(d, 2);
  ginv.v = mat_inverse(g.v, d);
  Arr gamma(d, 3);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int l = 0; l < d; ++l) s += ginv(k, l) * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
        gamma(k, i, j) = 0.5 * s;
      }
  return gamma;
}

/// R_ijkl = g_lp R^p_ijk with R^l_ijk = ∂_iΓ^l_jk - ∂_jΓ^l_ik + Γ^l_im Γ^m_jk - Γ^l_jm Γ^m_ik,
/// ∂Γ by central differences of fd_christoffel.
inline Arr fd_riemann(const tvb::Chart& chart, std::span<const double> p, double h_outer = 1e-3,
                      double h_inner = 1e-4) {
  const int d = chart.dim();
  const Arr gamma = fd_christoffel(chart, p, h_inner);
  std::vector<Arr> dgamma(static_cast<std::size_t>(d));  // dgamma[a](l,j,k)
  Vec q(p.begin(), p.end());
  for (int a = 0; a < d; ++a) {
    q[static_cast<std::size_t>(a)] = p[static_cast<std::size_t>(a)] + h_outer;
    const Arr gp = fd_christoffel(chart, q, h_inner);
    q[static_cast<std::size_t>(a)] = p[static_cast<std::size_t>(a)] - h_outer;
    const Arr gm = fd_christoffel(chart, q, h_inner);
    q[static_cast<std::size_t>(a)] = p[static_cast<std::size_t>(a)];
    Arr da(d, 3);
    for (std::size_t n = 0; n < da.v.size(); ++n) da.v[n] = (gp.v[n] - gm.v[n]) / (2 * h_outer);
    dgamma[static_cast<std::size_t>(a)] = da;
  }
  const Arr g = metric_at(chart, p);
  Arr R(d, 4);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double s = 0.0;
          for (int pp = 0; pp < d; ++pp) {
            double up = dgamma[static_cast<std::size_t>(i)](pp, j, k) - dgamma[static_cast<std::size_t>(j)](pp, i, k);
            for (int m = 0; m < d; ++m) up += gamma(pp, i, m) * gamma(m, j, k) - gamma(pp, j, m) * gamma(m, i, k);
            s += g(l, pp) * up;
          }
          R(i, j, k, l) = s;
        }
  return R;
}

/// τ = g^{jk} g^{il} R_ijkl from the finite-difference tensor.
inline double fd_scalar_curvature(const tvb::Chart& chart, std::span<const double> p) {
  const Arr R = fd_riemann(chart, p);
  const int d = chart.dim();
  Arr ginv(d, 2);
  ginv.v = mat_inverse(metric_at(chart, p).v, d);
  double tau = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) tau += ginv(j, k) * ginv(i, l) * R(i, j, k, l);
  return tau;
}

/// Random points inside an entry's suggested grid box that satisfy the domain
/// with the given margin.
inline std::vector<Vec> random_points(const tvb::CatalogEntry& e, int count, std::uint64_t seed, double margin = 0.1) {
  std::mt19937_64 rng(seed);
  std::vector<Vec> out;
  const auto& axes = e.grid->axes;
  int guard = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++guard > 100000) throw std::runtime_error("oracle: cannot sample domain");
    Vec p;
    for (const auto& a : axes) {
      std::uniform_real_distribution<double> u(std::min(a.lo, a.hi), std::max(a.lo, a.hi));
      p.push_back(a.lo == a.hi ? a.lo : u(rng));
    }
    if (e.chart->spec().domain.contains(p, margin)) out.push_back(p);
  }
  return out;
}

}  // namespace oracle
