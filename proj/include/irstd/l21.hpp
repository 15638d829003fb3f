#pragma once
//
// L2,1-norm proximal operators.
//
//   l21_prox_matrix   exact group soft-threshold of matrix columns
//   trifactor         alternating T-QR fit z ~ l * d * r_fac with orthogonal l, r_fac
//   l21_shrink_core   column shrinkage of the core in the Fourier domain
//   tlnmtqr           tri-factorize, shrink the core, recompose
//
// The tensor routines work on Fourier-domain slices throughout and transform
// back once at the end; every t-product in the fit is a per-slice matrix product.
//

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "irstd/error.hpp"
#include "irstd/fft.hpp"
#include "irstd/tensor.hpp"
#include "irstd/tproduct.hpp"
#include "irstd/tqr.hpp"

namespace irstd {

/// Stopping rule of the tri-factorization fit.
struct TrifactorOptions {
  std::size_t max_iters = 20;
  double eps = 1e-6;  // on the squared Frobenius fit error
};

struct TriFactor {
  Tensor3 l;      // n1 x r x n3
  Tensor3 d;      // r x r x n3
  Tensor3 r_fac;  // r x n2 x n3
  std::size_t rank = 0;
  std::size_t iterations = 0;
  /// ||z - l*d*r_fac||_F^2 after each iteration.
  std::vector<double> fit_history;

  double fit_error() const { return fit_history.empty() ? 0.0 : fit_history.back(); }
};

struct ShrinkInput {
  Tensor3 d_t;  // r x r x n3 core
  double tau = 0.0;
};

/// Column j of the result is max(1 - tau/||y_j||, 0) * y_j.
inline Eigen::MatrixXd l21_prox_matrix(const Eigen::MatrixXd& y, double tau) {
  if (!(tau > 0.0)) throw Error(ErrorCode::InvalidArgument, "tau must be positive");
  Eigen::MatrixXd z = y;
  for (Eigen::Index j = 0; j < y.cols(); ++j) {
    const double n = y.col(j).norm();
    const double scale = n > tau ? (n - tau) / n : 0.0;
    z.col(j) *= scale;
  }
  return z;
}

namespace detail {

inline void check_rank(std::size_t r, std::size_t n1, std::size_t n2) {
  if (r < 1 || r > std::min(n1, n2)) {
    throw Error(ErrorCode::RankOutOfRange,
                "rank " + std::to_string(r) + " outside [1, " + std::to_string(std::min(n1, n2)) + "]");
  }
}

inline void check_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw Error(ErrorCode::InvalidArgument, "tau must be positive");
}

struct FourierTriFactor {
  CTensor3 l, d, r;
  std::vector<double> fit_history;
};

// Real-domain squared Frobenius norm of a transformed tensor (Parseval).
inline double fourier_squared_norm(const CTensor3& a) {
  return squared_norm(a) / static_cast<double>(a.n3());
}

inline FourierTriFactor fourier_trifactor(const CTensor3& z, std::size_t rank, const TrifactorOptions& opts) {
  const std::size_t n1 = z.n1(), n2 = z.n2(), n3 = z.n3();
  // The rectangular identity's transform has eye(r, n2) in every slice.
  CTensor3 r(rank, n2, n3);
  for (std::size_t k = 0; k < n3; ++k) r.slice(k).setIdentity();

  const CTensor3 z_adj = fourier_adjoint(z);
  FourierTriFactor out{CTensor3(n1, rank, n3), CTensor3(rank, rank, n3), std::move(r), {}};
  for (std::size_t it = 0; it < std::max<std::size_t>(opts.max_iters, 1); ++it) {
    auto [l, unused] = fourier_qr(fourier_product(z, fourier_adjoint(out.r)));
    auto [r_new, d_adj] = fourier_qr(fourier_product(z_adj, l));
    out.l = std::move(l);
    out.r = fourier_adjoint(r_new);
    out.d = fourier_adjoint(d_adj);

    const CTensor3 fit = z - fourier_product(fourier_product(out.l, out.d), out.r);
    out.fit_history.push_back(fourier_squared_norm(fit));
    if (out.fit_history.back() <= opts.eps) break;
  }
  return out;
}

// Scales every column of every Fourier slice by max(1 - tau/||col||, 0).
inline void shrink_fourier_columns(CTensor3& d, double tau) {
  for (std::size_t k = 0; k < independent_slices(d.n3()); ++k) {
    auto slice = d.slice(k);
    for (Eigen::Index j = 0; j < slice.cols(); ++j) {
      const double n = slice.col(j).norm();
      const double scale = n > tau ? (n - tau) / n : 0.0;
      slice.col(j) *= scale;
    }
  }
  mirror_conjugate(d);
}

}  // namespace detail

inline TriFactor trifactor(const Tensor3& z, std::size_t r, const TrifactorOptions& opts = {}) {
  detail::check_rank(r, z.n1(), z.n2());
  auto f = detail::fourier_trifactor(fft_mode3(z), r, opts);
  TriFactor out{ifft_mode3(std::move(f.l)), ifft_mode3(std::move(f.d)), ifft_mode3(std::move(f.r)), r,
                f.fit_history.size(), std::move(f.fit_history)};
  return out;
}

inline Tensor3 l21_shrink_core(const ShrinkInput& input) {
  detail::check_tau(input.tau);
  CTensor3 d = fft_mode3(input.d_t);
  detail::shrink_fourier_columns(d, input.tau);
  return ifft_mode3(std::move(d));
}

/// Approximate prox of tau * ||.||_{2,1} at x through a rank-r tri-factorization.
/// Each outer pass refits l, r_fac to the current estimate, shrinks the core
/// l^* * x * r_fac^*, and recomposes. Passes stop early once the pre-shrink fit
/// is within opts.eps.
inline Tensor3 tlnmtqr(const Tensor3& x, std::size_t r, double tau, std::size_t outer_iters = 1,
                       const TrifactorOptions& opts = {}) {
  detail::check_rank(r, x.n1(), x.n2());
  detail::check_tau(tau);
  const CTensor3 x_hat = fft_mode3(x);
  CTensor3 m = x_hat;
  for (std::size_t pass = 0; pass < std::max<std::size_t>(outer_iters, 1); ++pass) {
    auto f = detail::fourier_trifactor(m, r, opts);
    CTensor3 core = pass == 0 ? std::move(f.d)
                              : fourier_product(fourier_product(fourier_adjoint(f.l), x_hat), fourier_adjoint(f.r));
    detail::shrink_fourier_columns(core, tau);
    m = fourier_product(fourier_product(f.l, core), f.r);
    if (f.fit_history.back() <= opts.eps) break;
  }
  return ifft_mode3(std::move(m));
}

}  // namespace irstd
