#pragma once

#include <array>
#include <stdexcept>

#include "tvb/geometry.hpp"
#include "tvb/tensor.hpp"

namespace tvb {

/// A precondition of a curvature formula does not hold for the given data
/// (e.g. the operator of a non trace-free tensor was requested).
class ContractViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

using Mat3 = std::array<std::array<double, 3>, 3>;
using Mat6 = std::array<std::array<double, 6>, 6>;

/// Curvature data re-expressed in the adapted unitary frame
/// {e1, e2 = J e1, e3, e4 = J e3, ...}.
struct FrameData {
  Tensor frame;      // frame(i, a) = e_a^i
  Tensor frame_inv;  // coframe
  Tensor J;          // J in the frame
  Tensor riemann;
  Tensor ricci;
  Tensor ricci_star;
};

FrameData to_adapted_frame(const CurvatureData& cd);

// ---------------------------------------------------------------------------
// Bochner and Weyl tensors

/// Tricerri-Vanhecke Bochner tensor. Dispatches to the n = 2 or n >= 3
/// formula; `n` must match the data (real dimension 2n).
Tensor bochner_tensor(const CurvatureData& cd, int n);

/// n = 2 formula:
///   B = R + ½ g○∧ρ + (1/12){gΔρ* - g○∧ρ* - gΔ(ρ*J) + g○∧(ρ*J)}
///       + ((3τ*-τ)/96) gΔg - ((τ+τ*)/16) g○∧g
/// with (aJ)(X,Y) = a(JX,JY).
Tensor bochner_tensor_surface(const CurvatureData& cd);

/// n >= 3 formula (ten terms). Throws std::invalid_argument for n = 2,
/// whose denominators vanish.
Tensor bochner_tensor_higher(const CurvatureData& cd, int n);

/// W = R + g○∧ρ/(2n-2) - τ g○∧g / (2(2n-1)(2n-2)).
Tensor weyl_tensor(const CurvatureData& cd);

/// Closed form of W on a Bochner-flat almost Hermitian surface, written in
/// terms of τ, τ* and the antisymmetric part of ρ* only.
Tensor weyl_closed_form(const CurvatureData& cd);

/// Curvature tensor of a Bochner-flat almost Hermitian surface rebuilt from
/// its Ricci data. Throws std::invalid_argument when ρ is not symmetric or
/// ρ*(X,Y) != ρ*(JY,JX) beyond `tol` (relative).
Tensor reconstruct_R(const Tensor& rho, const Tensor& rho_star, double tau, double tau_star, const Tensor& g,
                     const Tensor& J, double tol = 1e-8);

// ---------------------------------------------------------------------------
// Λ² machinery (real dimension 4)

/// Six 2-forms in frame components: Ω₀, Φ, JΦ span Λ²₊ and Ψ₁, Ψ₂, Ψ₃ span
/// Λ²₋. Orthonormal for <α,β> = ½ α_ij β^ij.
struct Lambda2Basis {
  Tensor frame;
  std::array<Tensor, 6> forms;

  static constexpr std::array<const char*, 6> names{"Omega0", "Phi", "JPhi", "Psi1", "Psi2", "Psi3"};
};

/// Throws ContractViolation if the frame is not adapted (e2 = J e1, e4 = J e3).
Lambda2Basis lambda2_basis(const Tensor& frame, const Tensor& J, double tol = 1e-8);

/// <α, β> = ½ Σ α_ij β_ij in orthonormal frame components.
double form_inner(const Tensor& a, const Tensor& b);

struct WeylBlocks {
  Mat6 matrix{};  // M_ab = <𝒲(β_a), β_b>
  Mat3 w_plus{};
  Mat3 w_minus{};
  Mat3 off_diagonal{};  // rows Λ²₊, columns Λ²₋
};

/// Matrix of the Weyl curvature operator in the Λ² basis. The operator is
/// fixed by <𝒲(x∧y), z∧w> = -W(x,y,z,w), so
/// M_ab = -¼ Σ β_a^{ij} β_b^{kl} W_ijkl in frame components.
/// Throws ContractViolation when W is not trace-free within `tol`.
WeylBlocks weyl_operator(const Tensor& W, const Tensor& g_inv, const Lambda2Basis& basis, double tol = 1e-8);

/// Operator matrix predicted for a Bochner-flat surface from τ, τ* and the
/// frame components of ρ*.
Mat6 weyl_operator_closed_form(double tau, double tau_star, const Tensor& rho_star_frame);

struct WeylNorms {
  double plus_sq = 0.0;
  double minus_sq = 0.0;
};

/// Squared Frobenius norms of the diagonal blocks.
WeylNorms wpm_norms(const WeylBlocks& blocks);

/// ‖𝒲₊‖² = (3τ*-τ)²/96 + ½{(ρ*13-ρ*31)² + (ρ*14-ρ*41)²}, valid when B(R) = 0.
double w_plus_sq_closed_form(double tau, double tau_star, const Tensor& rho_star_frame);

struct GQuantity {
  double full_sum = 0.0;     // Σ_ij (ρ*_ij - ρ*_ji)²
  double closed_form = 0.0;  // 4{(ρ*13-ρ*31)² + (ρ*14-ρ*41)²}
  double value() const { return full_sum; }
};

/// Both expressions for G from ρ* in the adapted frame. Throws
/// ContractViolation when they disagree beyond `tol` (relative), which
/// signals ρ* data that does not satisfy ρ*(X,Y) = ρ*(JY,JX).
GQuantity g_quantity(const Tensor& rho_star_frame, double tol = 1e-8);

struct CharacteristicDensities {
  double p1 = 0.0;
  double chi = 0.0;
  double c1sq = 0.0;
  // Forms specialised to B(R) = 0.
  double p1_bochner_flat = 0.0;
  double chi_bochner_flat = 0.0;
  double c1sq_bochner_flat = 0.0;
};

/// Pointwise integrands of p₁, χ and c₁² = p₁ + 2χ. Requires real dimension 4.
CharacteristicDensities characteristic_integrands(const CurvatureData& cd, const WeylBlocks& blocks, double G);

struct Uvwh {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;
  double h = 0.0;
};

/// u = -R1313 + R1324, v = -R1414 - R1423, w = -R1314 - R1323,
/// h = (u-v)² - 4w², with R in the adapted frame (1-based indices).
Uvwh uvwh(const FrameData& fd);

struct NormDecomposition {
  double lhs = 0.0;  // ‖R‖²
  double rhs = 0.0;  // (3τ*-τ)²/24 + 2‖ρ - (τ/4)g‖² + τ²/6 + G/2
  double residual() const { return std::abs(lhs - rhs); }
};

/// ‖R‖² decomposition on a Bochner-flat surface. Throws ContractViolation
/// when ‖B(R)‖ exceeds `tol` scaled by max(1, ‖R‖).
NormDecomposition curvature_norm_decomposition(const CurvatureData& cd, double G, double tol = 1e-8);

/// Largest |LHS - RHS| of the curvature identity
///   R(X,Y,Z,W) - R(JX,JY,Z,W) - R(X,Y,JZ,JW) + R(JX,JY,JZ,JW)
///     = R(X,JY,Z,JW) + R(X,JY,JZ,W) + R(JX,Y,JZ,W) + R(JX,Y,Z,JW)
/// over all 4-tuples of frame vectors.
double gray_identity_residual(const FrameData& fd);

/// Algebraic curvature tensor of constant holomorphic sectional curvature c
/// for metric g and structure J.
Tensor complex_space_form_tensor(const Tensor& g, const Tensor& J, double c);

}  // namespace tvb
