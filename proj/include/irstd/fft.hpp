#pragma once
//
// Discrete Fourier transforms over Tensor3 backed by FFTW.
//
// Convention: unnormalized forward transform (kernel e^{-2 pi i nk/N}), inverse
// scaled by 1/N, so that ifft(fft(a)) == a.
//

#include <cmath>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "irstd/error.hpp"
#include "irstd/tensor.hpp"

namespace irstd {

/// Imaginary parts above this (relative, Frobenius) fraction of the result mean
/// the input was not the transform of a real tensor.
inline constexpr double kImaginaryResidueLimit = 1e-6;

namespace detail {

// FFTW's planner is not re-entrant.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

class FftwPlan {
 public:
  explicit FftwPlan(fftw_plan p) : plan_(p) {
    if (plan_ == nullptr) throw Error(ErrorCode::InvalidArgument, "FFTW failed to create a plan");
  }
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;
  ~FftwPlan() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_);
  }
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

inline fftw_complex* as_fftw(cdouble* p) { return reinterpret_cast<fftw_complex*>(p); }

// In-place transform of every tube (i, j, :).
inline void transform_tubes(CTensor3& a, int sign) {
  const int n = static_cast<int>(a.n3());
  const int howmany = static_cast<int>(a.slice_size());
  auto* buf = as_fftw(a.data().data());
  fftw_plan p;
  {
    std::lock_guard lock(fftw_planner_mutex());
    p = fftw_plan_many_dft(1, &n, howmany, buf, nullptr, howmany, 1, buf, nullptr, howmany, 1, sign,
                           FFTW_ESTIMATE);
  }
  FftwPlan plan(p);
  plan.execute();
}

// In-place separable 3-D transform.
inline void transform_3d(CTensor3& a, int sign) {
  auto* buf = as_fftw(a.data().data());
  fftw_plan p;
  {
    std::lock_guard lock(fftw_planner_mutex());
    // row-major (n3, n2, n1) is exactly our slice-major layout
    p = fftw_plan_dft_3d(static_cast<int>(a.n3()), static_cast<int>(a.n2()), static_cast<int>(a.n1()), buf,
                         buf, sign, FFTW_ESTIMATE);
  }
  FftwPlan plan(p);
  plan.execute();
}

inline CTensor3 to_complex(const Tensor3& a) {
  CTensor3 c(a.n1(), a.n2(), a.n3());
  auto src = a.data();
  auto dst = c.data();
  for (std::size_t n = 0; n < src.size(); ++n) dst[n] = cdouble(src[n], 0.0);
  return c;
}

inline Tensor3 real_part_checked(const CTensor3& c, double scale) {
  double re2 = 0.0, im2 = 0.0;
  std::vector<double> out(c.size());
  auto src = c.data();
  for (std::size_t n = 0; n < src.size(); ++n) {
    out[n] = src[n].real() * scale;
    re2 += out[n] * out[n];
    im2 += src[n].imag() * src[n].imag() * scale * scale;
  }
  if (im2 > 0.0 && std::sqrt(im2) > kImaginaryResidueLimit * std::sqrt(re2 + im2)) {
    throw Error(ErrorCode::ImaginaryResidueTooLarge,
                "relative imaginary residue " + std::to_string(std::sqrt(im2 / (re2 + im2))));
  }
  return Tensor3(c.n1(), c.n2(), c.n3(), std::move(out));
}

}  // namespace detail

/// Unnormalized DFT of every tube along mode 3.
inline CTensor3 fft_mode3(const Tensor3& a) {
  CTensor3 c = detail::to_complex(a);
  if (a.n3() > 1) detail::transform_tubes(c, FFTW_FORWARD);
  return c;
}

inline CTensor3 fft_mode3(CTensor3 a) {
  if (a.n3() > 1) detail::transform_tubes(a, FFTW_FORWARD);
  return a;
}

/// Inverse of fft_mode3 for conjugate-symmetric input; the imaginary residue is
/// discarded, or rejected with ImaginaryResidueTooLarge if it is not round-off.
inline Tensor3 ifft_mode3(CTensor3 a) {
  if (a.n3() > 1) detail::transform_tubes(a, FFTW_BACKWARD);
  return detail::real_part_checked(a, 1.0 / static_cast<double>(a.n3()));
}

/// Separable 3-D DFT over all three modes.
inline CTensor3 fft3(const Tensor3& a) {
  CTensor3 c = detail::to_complex(a);
  detail::transform_3d(c, FFTW_FORWARD);
  return c;
}

inline Tensor3 ifft3(CTensor3 a) {
  detail::transform_3d(a, FFTW_BACKWARD);
  return detail::real_part_checked(a, 1.0 / static_cast<double>(a.size()));
}

}  // namespace irstd
