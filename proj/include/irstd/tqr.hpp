#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/QR>

#include "irstd/tensor.hpp"
#include "irstd/tproduct.hpp"

namespace irstd {

struct TQrResult {
  Tensor3 q;  // n1 x s x n3, s = min(n1, n2)
  Tensor3 r;  // s x n2 x n3
};

namespace detail {

// Economy Householder QR, normalized so that diag(R) is real and nonnegative.
template <typename Matrix>
std::pair<Matrix, Matrix> economy_qr(const Matrix& a) {
  const Eigen::Index m = a.rows();
  const Eigen::Index s = std::min(a.rows(), a.cols());
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(m, s);
  Matrix r = qr.matrixQR().topRows(s).template triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < s; ++j) {
    const auto d = r(j, j);
    const double mag = std::abs(d);
    if (mag == 0.0) continue;
    const auto phase = d / mag;
    q.col(j) *= phase;
    if constexpr (is_complex<typename Matrix::Scalar>::value) {
      r.row(j) *= std::conj(phase);
    } else {
      r.row(j) *= phase;
    }
  }
  return {std::move(q), std::move(r)};
}

}  // namespace detail

/// Slice-wise economy QR of a Fourier-domain tensor (transform of a real one).
/// Self-conjugate slices are factored in real arithmetic so that the inverse
/// transform stays exactly real.
inline std::pair<CTensor3, CTensor3> fourier_qr(const CTensor3& a) {
  const std::size_t s = std::min(a.n1(), a.n2());
  CTensor3 q(a.n1(), s, a.n3());
  CTensor3 r(s, a.n2(), a.n3());
  for (std::size_t k = 0; k < independent_slices(a.n3()); ++k) {
    if (self_conjugate_slice(k, a.n3())) {
      auto [qk, rk] = detail::economy_qr<Eigen::MatrixXd>(a.slice(k).real());
      q.slice(k) = qk.cast<cdouble>();
      r.slice(k) = rk.cast<cdouble>();
    } else {
      auto [qk, rk] = detail::economy_qr<Eigen::MatrixXcd>(a.slice(k));
      q.slice(k) = qk;
      r.slice(k) = rk;
    }
  }
  mirror_conjugate(q);
  mirror_conjugate(r);
  return {std::move(q), std::move(r)};
}

/// Tensor QR: a = q * r with q^* * q = I (t-product sense).
inline TQrResult t_qr(const Tensor3& a) {
  auto [q, r] = fourier_qr(fft_mode3(a));
  return {ifft_mode3(std::move(q)), ifft_mode3(std::move(r))};
}

}  // namespace irstd
