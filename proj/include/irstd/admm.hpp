#pragma once
//
// ADMM solver for the background / target / noise split
//
//   min ||Z||_{2,1} + lambda_s ||T||_1 + lambda3 ||N||_F^2
//       + lambda_tv (||V1||_1 + ||V2||_1 + delta ||V3||_1)
//   s.t. K = B + T + N,  Z = B,  V1 = D_h B,  V2 = D_v B,  V3 = D_z B
//
// One sweep updates Z, B, T, (V1, V2, V3), N, then the five multipliers and the
// penalty mu, in that order.
//

#include <array>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "irstd/asstv.hpp"
#include "irstd/error.hpp"
#include "irstd/fft.hpp"
#include "irstd/l21.hpp"
#include "irstd/tensor.hpp"

namespace irstd {

/// lambda_s = H / sqrt(max(n1, n2) * L)
inline double derive_lambda_s(double h, std::size_t n1, std::size_t n2, std::size_t frames) {
  return h / std::sqrt(static_cast<double>(std::max(n1, n2) * frames));
}

struct SolverParams {
  /// Sparsity weight; derived from `h` and the tensor shape when unset.
  std::optional<double> lambda_s;
  double h = 6.0;
  double lambda_tv = 0.5;
  double lambda3 = 100.0;
  double delta = 1.0;

  double mu0 = 0.005;
  double rho = 1.5;
  double mu_max = 1e7;
  double xi = 1e-6;

  std::size_t rank = 180;
  std::size_t frames_per_window = 3;
  /// TLNMTQR passes per Z-update.
  std::size_t inner_iters = 1;
  std::size_t max_outer_iters = 500;
  TrifactorOptions fit{};

  /// Use ||K-B-T-N||^2/||K||^2 instead of the default test with the +y1/mu term.
  bool plain_residual = false;

  double lambda_s_for(const Tensor3& k) const {
    return lambda_s ? *lambda_s : derive_lambda_s(h, k.n1(), k.n2(), k.n3());
  }

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be positive");
    };
    if (lambda_s) positive(*lambda_s, "lambda_s");
    positive(h, "h");
    positive(lambda_tv, "lambda_tv");
    positive(lambda3, "lambda3");
    positive(delta, "delta");
    positive(mu0, "mu0");
    positive(mu_max, "mu_max");
    positive(xi, "xi");
    if (!(rho > 1.0)) throw Error(ErrorCode::InvalidArgument, "rho must exceed 1");
    if (!(mu0 < mu_max)) throw Error(ErrorCode::InvalidArgument, "mu0 must be below mu_max");
    if (rank == 0) throw Error(ErrorCode::RankOutOfRange, "rank must be positive");
    if (frames_per_window == 0 || max_outer_iters == 0 || inner_iters == 0) {
      throw Error(ErrorCode::InvalidArgument, "iteration counts and window length must be positive");
    }
  }
};

struct SolverState {
  Tensor3 b, t, n, z;
  std::array<Tensor3, 3> v;  // V1..V3 (h, v, z)
  std::array<Tensor3, 5> y;  // y1..y5
  double mu = 0.0;
  std::size_t k = 0;
  std::vector<double> residual_history;
  std::vector<double> mu_history;

  static SolverState initial(const Tensor3& shape_of, double mu0) {
    const Tensor3 zero(shape_of.n1(), shape_of.n2(), shape_of.n3());
    return SolverState{zero, zero, zero, zero, {zero, zero, zero}, {zero, zero, zero, zero, zero}, mu0, 0, {}, {}};
  }

  bool all_finite() const {
    for (const Tensor3* x : {&b, &t, &n, &z}) {
      if (!x->all_finite()) return false;
    }
    for (const auto& x : v) {
      if (!x.all_finite()) return false;
    }
    for (const auto& x : y) {
      if (!x.all_finite()) return false;
    }
    return std::isfinite(mu);
  }
};

struct Decomposition {
  Tensor3 background, target, noise;
  std::size_t iterations = 0;
  double final_residual = 0.0;
  double wall_seconds = 0.0;
  bool converged = false;
  std::vector<double> residual_history;
  std::vector<double> mu_history;
};

/// Z = TLNMTQR(b - y2/mu) with threshold 1/mu.
inline Tensor3 update_z(const Tensor3& b, const Tensor3& y2, double mu, const SolverParams& p) {
  b.require_same_shape(y2);
  return tlnmtqr(b - y2 * (1.0 / mu), p.rank, 1.0 / mu, p.inner_iters, p.fit);
}

/// Solves (2I + sum_i D_i^T D_i) B = rhs on the 3-D Fourier grid.
inline Tensor3 solve_b_system(const Tensor3& rhs, const OperatorSpectrum& spectrum) {
  if (rhs.n1() != spectrum.n1() || rhs.n2() != spectrum.n2() || rhs.n3() != spectrum.n3()) {
    throw Error(ErrorCode::DimensionMismatch, "spectrum does not match " + rhs.shape_string());
  }
  CTensor3 f = fft3(rhs);
  const Tensor3 den = spectrum.denominator();
  auto fd = f.data();
  auto dd = den.data();
  for (std::size_t n = 0; n < fd.size(); ++n) fd[n] /= dd[n];
  return ifft3(std::move(f));
}

inline Tensor3 update_b(const SolverState& s, const Tensor3& k_tensor, const OperatorSpectrum& spectrum) {
  const double inv_mu = 1.0 / s.mu;
  Tensor3 rhs = k_tensor - s.t - s.n + s.y[0] * inv_mu + s.z + s.y[1] * inv_mu;
  for (std::size_t i = 0; i < 3; ++i) rhs += diff(s.v[i] + s.y[i + 2] * inv_mu, kAllAxes[i], true);
  return solve_b_system(rhs, spectrum);
}

inline Tensor3 update_t(const Tensor3& k_tensor, const Tensor3& b, const Tensor3& n, const Tensor3& y1, double mu,
                        double lambda_s) {
  return soft_threshold(k_tensor - b - n + y1 * (1.0 / mu), lambda_s / mu);
}

inline std::array<Tensor3, 3> update_v(const Tensor3& b, const Tensor3& y3, const Tensor3& y4, const Tensor3& y5,
                                       double mu, double lambda_tv, double delta) {
  const std::array<const Tensor3*, 3> ys{&y3, &y4, &y5};
  const std::array<double, 3> levels{lambda_tv / mu, lambda_tv / mu, delta * lambda_tv / mu};
  std::array<Tensor3, 3> v;
  for (std::size_t i = 0; i < 3; ++i) v[i] = soft_threshold(diff(b, kAllAxes[i]) - *ys[i] * (1.0 / mu), levels[i]);
  return v;
}

/// N = (mu (K - B - T) + y1) / (mu + 2 lambda3)
inline Tensor3 update_n(const Tensor3& k_tensor, const Tensor3& b, const Tensor3& t, const Tensor3& y1, double mu,
                        double lambda3) {
  return ((k_tensor - b - t) * mu + y1) * (1.0 / (mu + 2.0 * lambda3));
}

inline SolverState update_multipliers(SolverState s, const Tensor3& k_tensor, const SolverParams& p) {
  const double mu = s.mu;
  s.y[0] += (k_tensor - s.b - s.t - s.n) * mu;
  s.y[1] += (s.z - s.b) * mu;
  for (std::size_t i = 0; i < 3; ++i) s.y[i + 2] += (s.v[i] - diff(s.b, kAllAxes[i])) * mu;
  s.mu = std::min(p.rho * mu, p.mu_max);
  return s;
}

/// Convergence measure of one sweep, evaluated with the pre-update y1 and mu.
inline double sweep_residual(const SolverState& s, const Tensor3& k_tensor, double k_sq_norm, bool plain) {
  Tensor3 r = k_tensor - s.b - s.t - s.n;
  if (!plain) r += s.y[0] * (1.0 / s.mu);
  const double num = squared_norm(r);
  return k_sq_norm > 0.0 ? num / k_sq_norm : num;
}

/// Called after every sweep with the state after the multiplier update.
using SweepObserver = std::function<void(const SolverState&)>;

inline Decomposition solve(const Tensor3& k_tensor, const SolverParams& p, const SweepObserver& observer = {}) {
  p.validate();
  if (!k_tensor.all_finite()) throw Error(ErrorCode::NonFinite, "input tensor has NaN/Inf entries");
  detail::check_rank(p.rank, k_tensor.n1(), k_tensor.n2());

  const auto start = std::chrono::steady_clock::now();
  const double lambda_s = p.lambda_s_for(k_tensor);
  const double k_sq = squared_norm(k_tensor);
  const OperatorSpectrum spectrum = operator_spectrum(k_tensor.n1(), k_tensor.n2(), k_tensor.n3());

  SolverState s = SolverState::initial(k_tensor, p.mu0);
  bool converged = false;
  double residual = 0.0;
  while (s.k < p.max_outer_iters) {
    s.z = update_z(s.b, s.y[1], s.mu, p);
    s.b = update_b(s, k_tensor, spectrum);
    s.t = update_t(k_tensor, s.b, s.n, s.y[0], s.mu, lambda_s);
    s.v = update_v(s.b, s.y[2], s.y[3], s.y[4], s.mu, p.lambda_tv, p.delta);
    s.n = update_n(k_tensor, s.b, s.t, s.y[0], s.mu, p.lambda3);

    residual = sweep_residual(s, k_tensor, k_sq, p.plain_residual);
    s.residual_history.push_back(residual);
    s.mu_history.push_back(s.mu);
    s = update_multipliers(std::move(s), k_tensor, p);
    ++s.k;

    if (!s.all_finite() || !std::isfinite(residual)) {
      throw Error(ErrorCode::NonFinite, "solver state diverged at iteration " + std::to_string(s.k));
    }
    if (observer) observer(s);
    if (residual <= p.xi) {
      converged = true;
      break;
    }
  }

  Decomposition d;
  d.background = std::move(s.b);
  d.target = std::move(s.t);
  d.noise = std::move(s.n);
  d.iterations = s.k;
  d.final_residual = residual;
  d.converged = converged;
  d.residual_history = std::move(s.residual_history);
  d.mu_history = std::move(s.mu_history);
  d.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return d;
}

}  // namespace irstd
