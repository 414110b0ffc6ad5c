#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace tvb {

enum class Variance : unsigned char { Covariant, Contravariant };

class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Dense tensor value at a point. Entries are stored row-major, so the last
/// index varies fastest. A (1,1) tensor such as J stores J^i_j at (i, j) and
/// acts on vectors as (Jv)^i = sum_j J^i_j v^j.
class Tensor {
public:
  Tensor() = default;
  Tensor(int dim, std::vector<Variance> variance);

  /// All-covariant tensor of the given rank.
  static Tensor covariant(int dim, int rank);
  /// (1,1) tensor: first index up, second down.
  static Tensor mixed(int dim);
  static Tensor from_matrix(int dim, std::span<const double> row_major, Variance v0 = Variance::Covariant,
                            Variance v1 = Variance::Covariant);

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(variance_.size()); }
  const std::vector<Variance>& variance() const { return variance_; }
  std::size_t size() const { return data_.size(); }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  template <class... I>
  double& operator()(I... idx) {
    return data_[offset(idx...)];
  }
  template <class... I>
  double operator()(I... idx) const {
    return data_[offset(idx...)];
  }

  double& at(std::span<const int> idx) { return data_[flat(idx)]; }
  double at(std::span<const int> idx) const { return data_[flat(idx)]; }

  /// Expand a flat offset into a multi-index.
  void unflatten(std::size_t offset, std::span<int> idx) const;

  Tensor& operator+=(const Tensor& other);
  Tensor& operator-=(const Tensor& other);
  Tensor& operator*=(double s);

  /// Maximum absolute entry.
  double max_abs() const;

  /// Same shape and variance.
  bool same_shape(const Tensor& other) const;

private:
  template <class... I>
  std::size_t offset(I... idx) const {
    std::size_t off = 0;
    ((off = off * dim_ + static_cast<std::size_t>(idx)), ...);
    return off;
  }
  std::size_t flat(std::span<const int> idx) const;

  int dim_ = 0;
  std::vector<Variance> variance_;
  std::vector<double> data_;
};

Tensor operator+(Tensor a, const Tensor& b);
Tensor operator-(Tensor a, const Tensor& b);
Tensor operator*(double s, Tensor a);

/// (a ○∧ b)(x,y,z,w) = a(x,z)b(y,w) - a(x,w)b(y,z) + b(x,z)a(y,w) - b(x,w)a(y,z).
Tensor kulkarni(const Tensor& a, const Tensor& b);

/// ā(x,y) = a(x, Jy) for a (0,2) tensor a and the (1,1) tensor J.
Tensor bar(const Tensor& a, const Tensor& J);

/// (aJ)(x,y) = a(Jx, Jy). This is the J-twist that enters the Bochner tensor
/// as ρJ and ρ*J.
Tensor twist(const Tensor& a, const Tensor& J);

/// (p ⊗ q)(x,y,z,w) = p(x,y) q(z,w) for (0,2) tensors.
Tensor outer(const Tensor& p, const Tensor& q);

/// a Δ b = a○∧b + ā○∧b̄ + 2 ā⊗b̄ + 2 b̄⊗ā.
Tensor triangle(const Tensor& a, const Tensor& b, const Tensor& J);

/// Contract slots i and j. When both slots have the same variance the
/// appropriate inverse metric (for two covariant slots) or metric (for two
/// contravariant slots) must be supplied.
Tensor contract(const Tensor& t, int i, int j, const Tensor* metric = nullptr);

/// Raise slot `slot` with the inverse metric g_inv (a (2,0) tensor, stored
/// as a plain symmetric matrix).
Tensor raise(const Tensor& t, int slot, const Tensor& g_inv);
/// Lower slot `slot` with the metric g.
Tensor lower(const Tensor& t, int slot, const Tensor& g);
/// Lower every contravariant slot.
Tensor lower_all(const Tensor& t, const Tensor& g);

/// Full metric contraction of t with itself: t_{i..} t^{i..}. No
/// combinatorial prefactor. Contravariant slots are lowered first.
double norm_sq(const Tensor& t, const Tensor& g, const Tensor& g_inv);
double norm(const Tensor& t, const Tensor& g, const Tensor& g_inv);

/// Express a tensor in the frame whose vectors are the columns of `frame`
/// (frame(i, a) = e_a^i). Covariant slots are contracted with the frame,
/// contravariant slots with its inverse.
Tensor to_frame(const Tensor& t, const Tensor& frame, const Tensor& frame_inv);

/// Apply a (1,1) tensor to a vector.
std::vector<double> apply(const Tensor& J, std::span<const double> v);

/// t(u, v) for a (0,2) tensor.
double pair(const Tensor& t, std::span<const double> u, std::span<const double> v);

Tensor identity(int dim);

/// Plain matrix inverse of a rank-2 tensor (variance flipped on both slots).
/// Throws std::domain_error when the matrix is numerically singular.
Tensor inverse(const Tensor& m);

}  // namespace tvb
