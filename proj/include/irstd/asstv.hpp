#pragma once
//
// Circular first differences along the three tensor modes and the asymmetric
// spatial-temporal TV norm built from them.
//
// horizontal: (D a)(i,j,k) = a(i+1,j,k) - a(i,j,k)
// vertical:   (D a)(i,j,k) = a(i,j+1,k) - a(i,j,k)
// temporal:   (D a)(i,j,k) = a(i,j,k+1) - a(i,j,k)
// Indices wrap, so each operator is a circular convolution and is diagonalized
// by the 3-D DFT.
//

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>

#include "irstd/error.hpp"
#include "irstd/tensor.hpp"

namespace irstd {

enum class Axis { horizontal = 0, vertical = 1, temporal = 2 };

inline constexpr std::array<Axis, 3> kAllAxes{Axis::horizontal, Axis::vertical, Axis::temporal};

inline Tensor3 diff(const Tensor3& a, Axis axis, bool adjoint = false) {
  const std::size_t n1 = a.n1(), n2 = a.n2(), n3 = a.n3();
  Tensor3 out(n1, n2, n3);
  for (std::size_t k = 0; k < n3; ++k) {
    for (std::size_t j = 0; j < n2; ++j) {
      for (std::size_t i = 0; i < n1; ++i) {
        std::size_t ii = i, jj = j, kk = k;
        // forward reads the next index, the adjoint the previous one
        switch (axis) {
          case Axis::horizontal: ii = adjoint ? (i + n1 - 1) % n1 : (i + 1) % n1; break;
          case Axis::vertical: jj = adjoint ? (j + n2 - 1) % n2 : (j + 1) % n2; break;
          case Axis::temporal: kk = adjoint ? (k + n3 - 1) % n3 : (k + 1) % n3; break;
        }
        out(i, j, k) = a(ii, jj, kk) - a(i, j, k);
      }
    }
  }
  return out;
}

/// ||D_h a||_1 + ||D_v a||_1 + delta * ||D_z a||_1
inline double asstv_norm(const Tensor3& a, double delta) {
  if (!(delta >= 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be nonnegative");
  return norm(diff(a, Axis::horizontal), NormKind::l1) + norm(diff(a, Axis::vertical), NormKind::l1) +
         delta * norm(diff(a, Axis::temporal), NormKind::l1);
}

/// 3-D Fourier multipliers of the three difference operators on an n1 x n2 x n3 grid.
struct OperatorSpectrum {
  std::array<CTensor3, 3> eigenvalues;

  const CTensor3& operator[](Axis axis) const { return eigenvalues[static_cast<std::size_t>(axis)]; }

  std::size_t n1() const { return eigenvalues[0].n1(); }
  std::size_t n2() const { return eigenvalues[0].n2(); }
  std::size_t n3() const { return eigenvalues[0].n3(); }

  /// 2 + sum over axes of |lambda|^2; the B-update divisor, >= 2 everywhere.
  Tensor3 denominator() const {
    Tensor3 d(n1(), n2(), n3());
    auto out = d.data();
    for (std::size_t n = 0; n < out.size(); ++n) {
      double s = 2.0;
      for (const auto& e : eigenvalues) s += std::norm(e.data()[n]);
      out[n] = s;
    }
    return d;
  }
};

inline OperatorSpectrum operator_spectrum(std::size_t n1, std::size_t n2, std::size_t n3) {
  const std::array<std::size_t, 3> dims{n1, n2, n3};
  OperatorSpectrum s{{CTensor3(n1, n2, n3), CTensor3(n1, n2, n3), CTensor3(n1, n2, n3)}};
  for (std::size_t axis = 0; axis < 3; ++axis) {
    const double n = static_cast<double>(dims[axis]);
    for (std::size_t k = 0; k < n3; ++k)
      for (std::size_t j = 0; j < n2; ++j)
        for (std::size_t i = 0; i < n1; ++i) {
          const std::array<std::size_t, 3> idx{i, j, k};
          const double angle = 2.0 * std::numbers::pi * static_cast<double>(idx[axis]) / n;
          // e^{i angle} - 1
          s.eigenvalues[axis](i, j, k) = cdouble(std::cos(angle) - 1.0, std::sin(angle));
        }
  }
  return s;
}

}  // namespace irstd
