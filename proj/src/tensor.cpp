#include "tvb/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace tvb {

namespace {

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

void require_same_dim(const Tensor& a, const Tensor& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw DimensionError(std::string(op) + ": dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()) + ")");
  }
}

void require_rank(const Tensor& a, int rank, const char* op) {
  if (a.rank() != rank) {
    throw DimensionError(std::string(op) + ": expected rank " + std::to_string(rank) + ", got " +
                         std::to_string(a.rank()));
  }
}

Variance flip(Variance v) {
  return v == Variance::Covariant ? Variance::Contravariant : Variance::Covariant;
}

Eigen::MatrixXd as_matrix(const Tensor& m) {
  const int d = m.dim();
  Eigen::MatrixXd out(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(i, j) = m(i, j);
  return out;
}

}  // namespace

Tensor::Tensor(int dim, std::vector<Variance> variance)
    : dim_(dim), variance_(std::move(variance)), data_(ipow(dim, static_cast<int>(variance_.size())), 0.0) {
  if (dim <= 0) throw DimensionError("tensor dimension must be positive");
}

Tensor Tensor::covariant(int dim, int rank) {
  return Tensor(dim, std::vector<Variance>(static_cast<std::size_t>(rank), Variance::Covariant));
}

Tensor Tensor::mixed(int dim) { return Tensor(dim, {Variance::Contravariant, Variance::Covariant}); }

Tensor Tensor::from_matrix(int dim, std::span<const double> row_major, Variance v0, Variance v1) {
  Tensor t(dim, {v0, v1});
  if (row_major.size() != t.size()) throw DimensionError("from_matrix: wrong number of entries");
  std::copy(row_major.begin(), row_major.end(), t.data_.begin());
  return t;
}

std::size_t Tensor::flat(std::span<const int> idx) const {
  if (idx.size() != variance_.size()) throw DimensionError("index arity does not match tensor rank");
  std::size_t off = 0;
  for (int i : idx) {
    if (i < 0 || i >= dim_) throw std::out_of_range("tensor index out of range");
    off = off * dim_ + static_cast<std::size_t>(i);
  }
  return off;
}

void Tensor::unflatten(std::size_t offset, std::span<int> idx) const {
  for (int k = rank() - 1; k >= 0; --k) {
    idx[k] = static_cast<int>(offset % static_cast<std::size_t>(dim_));
    offset /= static_cast<std::size_t>(dim_);
  }
}

bool Tensor::same_shape(const Tensor& other) const {
  return dim_ == other.dim_ && variance_ == other.variance_;
}

Tensor& Tensor::operator+=(const Tensor& other) {
  if (!same_shape(other)) throw DimensionError("tensor sum: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Tensor& Tensor::operator-=(const Tensor& other) {
  if (!same_shape(other)) throw DimensionError("tensor difference: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Tensor& Tensor::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

double Tensor::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
Tensor operator*(double s, Tensor a) { return a *= s; }

Tensor kulkarni(const Tensor& a, const Tensor& b) {
  require_same_dim(a, b, "kulkarni");
  require_rank(a, 2, "kulkarni");
  require_rank(b, 2, "kulkarni");
  const int d = a.dim();
  Tensor out = Tensor::covariant(d, 4);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z)
        for (int w = 0; w < d; ++w) {
          out(x, y, z, w) = a(x, z) * b(y, w) - a(x, w) * b(y, z) + b(x, z) * a(y, w) - b(x, w) * a(y, z);
        }
  return out;
}

Tensor bar(const Tensor& a, const Tensor& J) {
  require_same_dim(a, J, "bar");
  require_rank(a, 2, "bar");
  require_rank(J, 2, "bar");
  const int d = a.dim();
  Tensor out = Tensor::covariant(d, 2);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += a(x, k) * J(k, y);
      out(x, y) = s;
    }
  return out;
}

Tensor twist(const Tensor& a, const Tensor& J) {
  require_same_dim(a, J, "twist");
  require_rank(a, 2, "twist");
  require_rank(J, 2, "twist");
  const int d = a.dim();
  Tensor out = Tensor::covariant(d, 2);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      double s = 0.0;
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) s += J(k, x) * a(k, l) * J(l, y);
      out(x, y) = s;
    }
  return out;
}

Tensor outer(const Tensor& p, const Tensor& q) {
  require_same_dim(p, q, "outer");
  const int d = p.dim();
  std::vector<Variance> v = p.variance();
  v.insert(v.end(), q.variance().begin(), q.variance().end());
  Tensor out(d, std::move(v));
  const std::size_t nq = q.size();
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < nq; ++j) out.data()[i * nq + j] = p.data()[i] * q.data()[j];
  return out;
}

Tensor triangle(const Tensor& a, const Tensor& b, const Tensor& J) {
  require_same_dim(a, b, "triangle");
  const Tensor ab = bar(a, J);
  const Tensor bb = bar(b, J);
  Tensor out = kulkarni(a, b);
  out += kulkarni(ab, bb);
  out += 2.0 * outer(ab, bb);
  out += 2.0 * outer(bb, ab);
  return out;
}

Tensor contract(const Tensor& t, int i, int j, const Tensor* metric) {
  const int r = t.rank();
  if (i < 0 || j < 0 || i >= r || j >= r || i == j) {
    throw std::out_of_range("contract: slots " + std::to_string(i) + "," + std::to_string(j) +
                            " invalid for rank " + std::to_string(r));
  }
  if (i > j) std::swap(i, j);
  const int d = t.dim();
  const bool same = t.variance()[i] == t.variance()[j];
  if (same && metric == nullptr) throw std::invalid_argument("contract: metric needed for same-variance slots");
  if (same && metric->dim() != d) throw DimensionError("contract: metric dimension mismatch");

  std::vector<Variance> v;
  for (int k = 0; k < r; ++k)
    if (k != i && k != j) v.push_back(t.variance()[k]);
  Tensor out(d, v);

  std::vector<int> full(r);
  std::vector<int> rest(r - 2);
  for (std::size_t off = 0; off < out.size(); ++off) {
    out.unflatten(off, rest);
    for (int k = 0, m = 0; k < r; ++k)
      if (k != i && k != j) full[k] = rest[m++];
    double s = 0.0;
    for (int a = 0; a < d; ++a) {
      full[i] = a;
      if (same) {
        for (int b = 0; b < d; ++b) {
          const double mab = (*metric)(a, b);
          if (mab == 0.0) continue;
          full[j] = b;
          s += mab * t.at(full);
        }
      } else {
        full[j] = a;
        s += t.at(full);
      }
    }
    out.data()[off] = s;
  }
  return out;
}

namespace {

Tensor move_slot(const Tensor& t, int slot, const Tensor& m, Variance target) {
  if (slot < 0 || slot >= t.rank()) throw std::out_of_range("slot out of range");
  require_same_dim(t, m, "raise/lower");
  const int d = t.dim();
  std::vector<Variance> v = t.variance();
  v[slot] = target;
  Tensor out(d, v);
  std::vector<int> idx(t.rank());
  for (std::size_t off = 0; off < out.size(); ++off) {
    out.unflatten(off, idx);
    const int a = idx[slot];
    double s = 0.0;
    for (int b = 0; b < d; ++b) {
      idx[slot] = b;
      s += m(a, b) * t.at(idx);
    }
    out.data()[off] = s;
  }
  return out;
}

}  // namespace

Tensor raise(const Tensor& t, int slot, const Tensor& g_inv) {
  return move_slot(t, slot, g_inv, Variance::Contravariant);
}

Tensor lower(const Tensor& t, int slot, const Tensor& g) { return move_slot(t, slot, g, Variance::Covariant); }

Tensor lower_all(const Tensor& t, const Tensor& g) {
  Tensor out = t;
  for (int k = 0; k < t.rank(); ++k)
    if (out.variance()[k] == Variance::Contravariant) out = lower(out, k, g);
  return out;
}

double norm_sq(const Tensor& t, const Tensor& g, const Tensor& g_inv) {
  const Tensor low = lower_all(t, g);
  Tensor up = low;
  for (int k = 0; k < low.rank(); ++k) up = raise(up, k, g_inv);
  double s = 0.0;
  for (std::size_t i = 0; i < low.size(); ++i) s += low.data()[i] * up.data()[i];
  return s;
}

double norm(const Tensor& t, const Tensor& g, const Tensor& g_inv) {
  return std::sqrt(std::max(0.0, norm_sq(t, g, g_inv)));
}

Tensor to_frame(const Tensor& t, const Tensor& frame, const Tensor& frame_inv) {
  const int d = t.dim();
  Tensor out = t;
  for (int slot = 0; slot < t.rank(); ++slot) {
    Tensor next(d, out.variance());
    std::vector<int> idx(t.rank());
    const bool cov = out.variance()[slot] == Variance::Covariant;
    for (std::size_t off = 0; off < next.size(); ++off) {
      next.unflatten(off, idx);
      const int a = idx[slot];
      double s = 0.0;
      for (int i = 0; i < d; ++i) {
        idx[slot] = i;
        // covariant: T_a = T_i e_a^i ; contravariant: T^a = (E^-1)^a_i T^i
        s += (cov ? frame(i, a) : frame_inv(a, i)) * out.at(idx);
      }
      next.data()[off] = s;
    }
    out = std::move(next);
  }
  return out;
}

std::vector<double> apply(const Tensor& J, std::span<const double> v) {
  const int d = J.dim();
  std::vector<double> out(d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out[i] += J(i, j) * v[j];
  return out;
}

double pair(const Tensor& t, std::span<const double> u, std::span<const double> v) {
  const int d = t.dim();
  double s = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s += t(i, j) * u[i] * v[j];
  return s;
}

Tensor identity(int dim) {
  Tensor t = Tensor::mixed(dim);
  for (int i = 0; i < dim; ++i) t(i, i) = 1.0;
  return t;
}

Tensor inverse(const Tensor& m) {
  require_rank(m, 2, "inverse");
  const int d = m.dim();
  const Eigen::MatrixXd a = as_matrix(m);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) throw std::domain_error("matrix is singular");
  const double cond_guard = lu.rcond();
  if (cond_guard < 1e-14) throw std::domain_error("matrix is numerically singular");
  const Eigen::MatrixXd inv = lu.inverse();
  Tensor out(d, {flip(m.variance()[0]), flip(m.variance()[1])});
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(i, j) = inv(i, j);
  return out;
}

}  // namespace tvb
