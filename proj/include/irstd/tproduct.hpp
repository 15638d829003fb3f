#pragma once
//
// t-product algebra. Everything is computed slice-wise in the Fourier domain
// along mode 3: the DFT block-diagonalizes bcirc, so A * B becomes n3
// independent matrix products.
//
// For transforms of real tensors slice n3-k is the conjugate of slice k, so
// only slices 0..n3/2 are computed and the rest are mirrored. This keeps the
// inverse transform exactly real.
//

#include <cstddef>

#include "irstd/error.hpp"
#include "irstd/fft.hpp"
#include "irstd/tensor.hpp"

namespace irstd {

/// Number of leading Fourier slices that determine a conjugate-symmetric tensor.
constexpr std::size_t independent_slices(std::size_t n3) noexcept { return n3 / 2 + 1; }

/// True for the slices that equal their own mirror (k = 0 and k = n3/2 for even n3).
constexpr bool self_conjugate_slice(std::size_t k, std::size_t n3) noexcept {
  return k == 0 || 2 * k == n3;
}

/// Fills slices n3/2+1 .. n3-1 with conjugates of their mirrors.
inline void mirror_conjugate(CTensor3& a) {
  const std::size_t n3 = a.n3();
  for (std::size_t k = independent_slices(n3); k < n3; ++k) a.slice(k) = a.slice(n3 - k).conjugate();
}

/// Slice-wise product of two Fourier-domain tensors holding real-tensor transforms.
inline CTensor3 fourier_product(const CTensor3& a, const CTensor3& b) {
  if (a.n2() != b.n1() || a.n3() != b.n3()) {
    throw Error(ErrorCode::DimensionMismatch, "t-product of " + a.shape_string() + " and " + b.shape_string());
  }
  CTensor3 c(a.n1(), b.n2(), a.n3());
  for (std::size_t k = 0; k < independent_slices(a.n3()); ++k) c.slice(k).noalias() = a.slice(k) * b.slice(k);
  mirror_conjugate(c);
  return c;
}

/// Fourier-domain image of conj_transpose: the Hermitian adjoint of each slice.
inline CTensor3 fourier_adjoint(const CTensor3& a) {
  CTensor3 c(a.n2(), a.n1(), a.n3());
  for (std::size_t k = 0; k < a.n3(); ++k) c.slice(k) = a.slice(k).adjoint();
  return c;
}

inline Tensor3 t_product(const Tensor3& a, const Tensor3& b) {
  if (a.n2() != b.n1() || a.n3() != b.n3()) {
    throw Error(ErrorCode::DimensionMismatch, "t-product of " + a.shape_string() + " and " + b.shape_string());
  }
  return ifft_mode3(fourier_product(fft_mode3(a), fft_mode3(b)));
}

}  // namespace irstd
