#pragma once
//
// Third-order tensor container.
//
// Storage is slice-major: entry (i, j, k) lives at i + n1 * (j + n2 * k), so
// every frontal slice is a contiguous column-major n1 x n2 matrix.
//

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "irstd/error.hpp"

namespace irstd {

using cdouble = std::complex<double>;

namespace detail {

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

inline bool is_finite(double v) { return std::isfinite(v); }
inline bool is_finite(cdouble v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace detail

template <typename T>
class BasicTensor3 {
 public:
  using value_type = T;
  using matrix_type = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  using slice_map = Eigen::Map<matrix_type>;
  using const_slice_map = Eigen::Map<const matrix_type>;

  BasicTensor3() = default;

  BasicTensor3(std::size_t n1, std::size_t n2, std::size_t n3)
      : n1_(n1), n2_(n2), n3_(n3), data_(n1 * n2 * n3, T{}) {
    check_dims();
  }

  /// Takes ownership of `data`; throws NonFinite on NaN/Inf entries.
  BasicTensor3(std::size_t n1, std::size_t n2, std::size_t n3, std::vector<T> data)
      : n1_(n1), n2_(n2), n3_(n3), data_(std::move(data)) {
    check_dims();
    if (data_.size() != n1_ * n2_ * n3_) {
      throw Error(ErrorCode::DimensionMismatch,
                  "data length " + std::to_string(data_.size()) + " != n1*n2*n3");
    }
    check_finite();
  }

  static BasicTensor3 zeros(std::size_t n1, std::size_t n2, std::size_t n3) {
    return BasicTensor3(n1, n2, n3);
  }

  /// Ones on the main diagonal of the first frontal slice, zeros elsewhere.
  /// For n1 == n2 this is the t-product identity.
  static BasicTensor3 identity(std::size_t n1, std::size_t n2, std::size_t n3) {
    BasicTensor3 t(n1, n2, n3);
    for (std::size_t d = 0; d < std::min(n1, n2); ++d) t(d, d, 0) = T{1};
    return t;
  }
  static BasicTensor3 identity(std::size_t n, std::size_t n3) { return identity(n, n, n3); }

  std::size_t n1() const noexcept { return n1_; }
  std::size_t n2() const noexcept { return n2_; }
  std::size_t n3() const noexcept { return n3_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t slice_size() const noexcept { return n1_ * n2_; }

  bool same_shape(const BasicTensor3& o) const noexcept {
    return n1_ == o.n1_ && n2_ == o.n2_ && n3_ == o.n3_;
  }
  template <typename U>
  bool same_shape(const BasicTensor3<U>& o) const noexcept {
    return n1_ == o.n1() && n2_ == o.n2() && n3_ == o.n3();
  }

  T& operator()(std::size_t i, std::size_t j, std::size_t k) { return data_[i + n1_ * (j + n2_ * k)]; }
  const T& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[i + n1_ * (j + n2_ * k)];
  }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  slice_map slice(std::size_t k) {
    return slice_map(data_.data() + k * slice_size(), static_cast<Eigen::Index>(n1_),
                     static_cast<Eigen::Index>(n2_));
  }
  const_slice_map slice(std::size_t k) const {
    return const_slice_map(data_.data() + k * slice_size(), static_cast<Eigen::Index>(n1_),
                           static_cast<Eigen::Index>(n2_));
  }

  bool all_finite() const {
    for (const auto& v : data_) {
      if (!detail::is_finite(v)) return false;
    }
    return true;
  }

  BasicTensor3& operator+=(const BasicTensor3& o) {
    require_same_shape(o);
    for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += o.data_[n];
    return *this;
  }
  BasicTensor3& operator-=(const BasicTensor3& o) {
    require_same_shape(o);
    for (std::size_t n = 0; n < data_.size(); ++n) data_[n] -= o.data_[n];
    return *this;
  }
  BasicTensor3& operator*=(T s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend BasicTensor3 operator+(BasicTensor3 a, const BasicTensor3& b) { return a += b; }
  friend BasicTensor3 operator-(BasicTensor3 a, const BasicTensor3& b) { return a -= b; }
  friend BasicTensor3 operator*(BasicTensor3 a, T s) { return a *= s; }
  friend BasicTensor3 operator*(T s, BasicTensor3 a) { return a *= s; }
  friend BasicTensor3 operator-(BasicTensor3 a) { return a *= T{-1}; }

  friend bool operator==(const BasicTensor3&, const BasicTensor3&) = default;

  void require_same_shape(const BasicTensor3& o) const {
    if (!same_shape(o)) {
      throw Error(ErrorCode::DimensionMismatch, "shape " + shape_string() + " vs " + o.shape_string());
    }
  }

  std::string shape_string() const {
    return std::to_string(n1_) + "x" + std::to_string(n2_) + "x" + std::to_string(n3_);
  }

 private:
  void check_dims() const {
    if (n1_ == 0 || n2_ == 0 || n3_ == 0) {
      throw Error(ErrorCode::DimensionMismatch, "tensor dimensions must be positive");
    }
  }
  void check_finite() const {
    if (!all_finite()) throw Error(ErrorCode::NonFinite, "tensor has NaN/Inf entries");
  }

  std::size_t n1_ = 0, n2_ = 0, n3_ = 0;
  std::vector<T> data_;
};

using Tensor3 = BasicTensor3<double>;
using CTensor3 = BasicTensor3<cdouble>;

enum class NormKind { frobenius, l1, l21 };

template <typename T>
double norm(const BasicTensor3<T>& a, NormKind kind = NormKind::frobenius) {
  switch (kind) {
    case NormKind::frobenius: {
      double s = 0.0;
      for (const auto& v : a.data()) s += std::norm(v);
      return std::sqrt(s);
    }
    case NormKind::l1: {
      double s = 0.0;
      for (const auto& v : a.data()) s += std::abs(v);
      return s;
    }
    case NormKind::l21: {
      // sum over lateral slices a(:, j, :) of their Frobenius norms
      double total = 0.0;
      for (std::size_t j = 0; j < a.n2(); ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < a.n3(); ++k)
          for (std::size_t i = 0; i < a.n1(); ++i) s += std::norm(a(i, j, k));
        total += std::sqrt(s);
      }
      return total;
    }
  }
  return 0.0;
}

template <typename T>
double squared_norm(const BasicTensor3<T>& a) {
  double s = 0.0;
  for (const auto& v : a.data()) s += std::norm(v);
  return s;
}

inline double inner(const Tensor3& a, const Tensor3& b) {
  a.require_same_shape(b);
  double s = 0.0;
  auto x = a.data();
  auto y = b.data();
  for (std::size_t n = 0; n < x.size(); ++n) s += x[n] * y[n];
  return s;
}

/// Swaps each frontal slice and reverses slices 2..n3 (slice 1 stays first).
template <typename T>
BasicTensor3<T> conj_transpose(const BasicTensor3<T>& a) {
  BasicTensor3<T> out(a.n2(), a.n1(), a.n3());
  for (std::size_t k = 0; k < a.n3(); ++k) {
    const std::size_t src = (a.n3() - k) % a.n3();
    for (std::size_t j = 0; j < a.n2(); ++j)
      for (std::size_t i = 0; i < a.n1(); ++i) {
        if constexpr (detail::is_complex<T>::value) {
          out(j, i, k) = std::conj(a(i, j, src));
        } else {
          out(j, i, k) = a(i, j, src);
        }
      }
  }
  return out;
}

/// Stacks frontal slices vertically: (n1*n3) x n2.
inline Eigen::MatrixXd unfold(const Tensor3& a) {
  Eigen::MatrixXd m(a.n1() * a.n3(), a.n2());
  for (std::size_t k = 0; k < a.n3(); ++k)
    m.block(static_cast<Eigen::Index>(k * a.n1()), 0, static_cast<Eigen::Index>(a.n1()),
            static_cast<Eigen::Index>(a.n2())) = a.slice(k);
  return m;
}

inline Tensor3 fold(const Eigen::MatrixXd& m, std::size_t n1, std::size_t n3) {
  if (n1 * n3 != static_cast<std::size_t>(m.rows())) {
    throw Error(ErrorCode::DimensionMismatch, "fold: rows != n1*n3");
  }
  Tensor3 t(n1, static_cast<std::size_t>(m.cols()), n3);
  for (std::size_t k = 0; k < n3; ++k)
    t.slice(k) = m.block(static_cast<Eigen::Index>(k * n1), 0, static_cast<Eigen::Index>(n1), m.cols());
  return t;
}

/// Dense block-circulant matrix; block (p, q) is frontal slice (p - q) mod n3.
/// O((n1 n3)(n2 n3)) memory: meant for checking small cases only.
inline Eigen::MatrixXd bcirc_oracle(const Tensor3& a) {
  const auto n1 = static_cast<Eigen::Index>(a.n1());
  const auto n2 = static_cast<Eigen::Index>(a.n2());
  const std::size_t n3 = a.n3();
  Eigen::MatrixXd m(n1 * static_cast<Eigen::Index>(n3), n2 * static_cast<Eigen::Index>(n3));
  for (std::size_t p = 0; p < n3; ++p)
    for (std::size_t q = 0; q < n3; ++q)
      m.block(static_cast<Eigen::Index>(p) * n1, static_cast<Eigen::Index>(q) * n2, n1, n2) =
          a.slice((p + n3 - q) % n3);
  return m;
}

/// Element-wise soft threshold sign(x) * max(|x| - level, 0).
inline double soft_threshold(double x, double level) {
  const double m = std::abs(x) - level;
  return m > 0.0 ? std::copysign(m, x) : 0.0;
}

inline Tensor3 soft_threshold(const Tensor3& a, double level) {
  Tensor3 out(a.n1(), a.n2(), a.n3());
  auto src = a.data();
  auto dst = out.data();
  for (std::size_t n = 0; n < src.size(); ++n) dst[n] = soft_threshold(src[n], level);
  return out;
}

}  // namespace irstd
