#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tvb/chart.hpp"
#include "tvb/tensor.hpp"

namespace tvb {

/// Γ^k_ij stored at (k, i, j); ∂_a Γ^k_ij at (a, k, i, j); ∂_a ∂_b Γ^k_ij at
/// (a, b, k, i, j) when the jet had third metric derivatives.
struct Christoffel {
  Tensor gamma;
  Tensor dgamma;
  Tensor ddgamma;
};

/// Every pointwise curvature quantity at one point.
///
/// Conventions: R(X,Y)Z = ∇_X∇_Y Z - ∇_Y∇_X Z - ∇_[X,Y] Z and
/// R(x,y,z,w) = g(R(x,y)z, w), stored as riemann(i,j,k,l). With this, a round
/// sphere has R(x,y,y,x) > 0. ρ(X,Y) = tr(Z ↦ R(Z,X)Y) and
/// ρ*(X,Y) = tr(Z ↦ R(X,JZ)JY).
struct CurvatureData {
  std::vector<double> point;
  Tensor g;
  Tensor g_inv;
  Tensor J;
  std::optional<Christoffel> connection;  // absent for purely algebraic data
  Tensor riemann;
  Tensor ricci;
  Tensor ricci_star;
  double tau = 0.0;
  double tau_star = 0.0;
  Tensor q;       // Ricci operator, Q^i_j
  Tensor q_star;  // Ricci *-operator

  int dim() const { return g.dim(); }
  int n() const { return g.dim() / 2; }
};

Christoffel christoffel(const PointJet& jet);
Christoffel christoffel(const Chart& chart, std::span<const double> point);

/// Riemann tensor from the connection, lowered with g.
Tensor riemann(const PointJet& jet, const Christoffel& conn);
Tensor riemann(const Chart& chart, std::span<const double> point);

struct RicciPair {
  Tensor ricci;
  Tensor ricci_star;
  double tau = 0.0;
  double tau_star = 0.0;
  Tensor q;
  Tensor q_star;
};

RicciPair ricci_pair(const Tensor& R, const Tensor& g_inv, const Tensor& J);

/// All curvature data from a chart at a point (metric jet of order 2).
CurvatureData curvature(const Chart& chart, std::span<const double> point);
CurvatureData curvature(const PointJet& jet);

/// Curvature data for an algebraic curvature tensor R at a point with metric
/// g and structure J (no connection).
CurvatureData curvature_from_tensor(Tensor g, Tensor J, Tensor R);

/// Ω(X,Y) = g(JX,Y).
Tensor kahler_form(const Tensor& g, const Tensor& J);

/// ∇_i J_jk = g((∇_{e_i} J) e_j, e_k), stored at (i, j, k).
Tensor nabla_J(const PointJet& jet, const Christoffel& conn);

/// N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y]; N^k_ij stored at (k, i, j).
Tensor nijenhuis(const PointJet& jet);

/// Exterior derivative of the Kähler form, (dΩ)_ijk = ∂_iΩ_jk + ∂_jΩ_ki + ∂_kΩ_ij.
Tensor d_omega(const PointJet& jet);

/// ∇g assembled from Γ; identically zero for the Levi-Civita connection.
Tensor nabla_g(const PointJet& jet, const Christoffel& conn);

/// ∇_m R_ijkl stored at (m, i, j, k, l). Needs a jet of order 3.
Tensor nabla_R(const PointJet& jet, const Christoffel& conn, const Tensor& R);

/// Sum over cyclic (m,i,j) of ∇_m R_ijkl; vanishes by the second Bianchi identity.
Tensor second_bianchi(const Tensor& nabla_r);

/// Unitary frame {e_1, J e_1, e_3, J e_3, ...} obtained by Gram-Schmidt from
/// the coordinate basis in index order. Column a holds e_a, i.e.
/// frame(i, a) = e_a^i. Throws std::domain_error if g is not positive
/// definite or the process breaks down.
Tensor adapted_frame(const Tensor& g, const Tensor& J);

/// Sectional curvature of span{X, Y}: R(X,Y,Y,X) / (|X|²|Y|² - <X,Y>²).
double sectional_curvature(const Tensor& R, const Tensor& g, std::span<const double> x,
                           std::span<const double> y);

/// H(X) = R(X, JX, JX, X) / g(X,X)². Throws std::invalid_argument for X = 0.
double hol_sect_curv(const Tensor& R, const Tensor& g, const Tensor& J, std::span<const double> x);

/// R(x,y,z,w) for vectors.
double eval4(const Tensor& R, std::span<const double> x, std::span<const double> y, std::span<const double> z,
             std::span<const double> w);

}  // namespace tvb
