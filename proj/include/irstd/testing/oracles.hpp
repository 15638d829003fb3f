#pragma once
//
// Reference implementations used only to check the library. Each one takes a
// different route than the code it checks: dense block-circulant products,
// Gram-Schmidt QR, explicit difference stencils, scalar searches, union-find
// labelling and Riemann sums.
//

#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "irstd/random.hpp"
#include "irstd/sequence.hpp"
#include "irstd/tensor.hpp"

namespace irstd::testing {

inline Tensor3 random_tensor(Rng& rng, std::size_t n1, std::size_t n2, std::size_t n3, double scale = 1.0) {
  Tensor3 t(n1, n2, n3);
  for (double& v : t.data()) v = scale * rng.normal();
  return t;
}

inline Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

/// fold(bcirc(a) * unfold(b))
inline Tensor3 dense_t_product(const Tensor3& a, const Tensor3& b) {
  return fold(bcirc_oracle(a) * unfold(b), a.n1(), a.n3());
}

/// Modified Gram-Schmidt economy QR; R has a nonnegative diagonal.
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> gram_schmidt_qr(const Eigen::MatrixXd& a) {
  const Eigen::Index m = a.rows(), n = a.cols(), s = std::min(m, n);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(m, s);
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(s, n);
  Eigen::MatrixXd v = a;
  for (Eigen::Index j = 0; j < s; ++j) {
    r(j, j) = v.col(j).norm();
    q.col(j) = v.col(j) / r(j, j);
    for (Eigen::Index k = j + 1; k < n; ++k) {
      r(j, k) = q.col(j).dot(v.col(k));
      v.col(k) -= r(j, k) * q.col(j);
    }
  }
  return {q, r};
}

/// Minimizes a unimodal f on [lo, hi]: coarse grid, then golden-section refinement.
inline double scalar_minimize(const std::function<double(double)>& f, double lo, double hi, int grid = 2001) {
  double best = lo, best_val = f(lo);
  const double h = (hi - lo) / (grid - 1);
  for (int i = 1; i < grid; ++i) {
    const double x = lo + h * i;
    const double v = f(x);
    if (v < best_val) {
      best = x;
      best_val = v;
    }
  }
  double a = std::max(lo, best - h), b = std::min(hi, best + h);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  for (int it = 0; it < 200 && b - a > 1e-14 * (1.0 + std::abs(a)); ++it) {
    if (f(c) < f(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - g * (b - a);
    d = a + g * (b - a);
  }
  return 0.5 * (a + b);
}

/// Column-wise minimizer of tau ||Z||_{2,1} + 1/2 ||Z - Y||_F^2 found by
/// searching the scaling factor s in Z(:,j) = s Y(:,j).
inline Eigen::MatrixXd l21_prox_by_search(const Eigen::MatrixXd& y, double tau) {
  Eigen::MatrixXd z = y;
  for (Eigen::Index j = 0; j < y.cols(); ++j) {
    const double n = y.col(j).norm();
    if (n == 0.0) continue;
    const double scale = scalar_minimize(
        [&](double s) { return tau * std::abs(s) * n + 0.5 * (1 - s) * (1 - s) * n * n; }, 0.0, 1.0);
    z.col(j) = scale * y.col(j);
  }
  return z;
}

/// argmin_t weight |t| + penalty/2 (t - x)^2 by scalar search.
inline double soft_threshold_by_search(double x, double weight, double penalty) {
  const double span = std::abs(x) + 1.0;
  return scalar_minimize([&](double t) { return weight * std::abs(t) + 0.5 * penalty * (t - x) * (t - x); },
                         -span, span);
}

inline double l21_objective(const Eigen::MatrixXd& m, const Eigen::MatrixXd& x, double tau) {
  return tau * m.colwise().norm().sum() + 0.5 * (m - x).squaredNorm();
}

/// Dense circular forward-difference matrix on the vectorized n1 x n2 x n3 grid
/// (vectorization index i + n1 (j + n2 k)); axis 0, 1, 2 = rows, columns, frames.
inline Eigen::MatrixXd difference_stencil(std::size_t n1, std::size_t n2, std::size_t n3, int axis) {
  const std::size_t n = n1 * n2 * n3;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  auto idx = [&](std::size_t i, std::size_t j, std::size_t k) { return static_cast<Eigen::Index>(i + n1 * (j + n2 * k)); };
  for (std::size_t k = 0; k < n3; ++k)
    for (std::size_t j = 0; j < n2; ++j)
      for (std::size_t i = 0; i < n1; ++i) {
        const Eigen::Index row = idx(i, j, k);
        const Eigen::Index next = axis == 0   ? idx((i + 1) % n1, j, k)
                                  : axis == 1 ? idx(i, (j + 1) % n2, k)
                                              : idx(i, j, (k + 1) % n3);
        d(row, next) += 1.0;
        d(row, row) -= 1.0;
      }
  return d;
}

/// 2I + sum_i D_i^T D_i assembled densely.
inline Eigen::MatrixXd dense_b_system(std::size_t n1, std::size_t n2, std::size_t n3) {
  const auto n = static_cast<Eigen::Index>(n1 * n2 * n3);
  Eigen::MatrixXd a = 2.0 * Eigen::MatrixXd::Identity(n, n);
  for (int axis = 0; axis < 3; ++axis) {
    const Eigen::MatrixXd d = difference_stencil(n1, n2, n3, axis);
    a += d.transpose() * d;
  }
  return a;
}

inline Eigen::VectorXd vectorize(const Tensor3& t) {
  return Eigen::Map<const Eigen::VectorXd>(t.data().data(), static_cast<Eigen::Index>(t.size()));
}

/// Number of 8-connected components of {pixel >= tau}, via union-find.
inline std::size_t count_components_union_find(const GrayImage& img, double tau) {
  const std::size_t w = img.width, h = img.height;
  std::vector<std::size_t> parent(w * h);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto on = [&](std::size_t x, std::size_t y) { return img.at(x, y) >= tau; };
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) {
      if (!on(x, y)) continue;
      // join with the already-visited neighbours W, NW, N, NE
      const int offs[4][2] = {{-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
      for (const auto& o : offs) {
        const long nx = static_cast<long>(x) + o[0], ny = static_cast<long>(y) + o[1];
        if (nx < 0 || ny < 0 || nx >= static_cast<long>(w)) continue;
        if (!on(static_cast<std::size_t>(nx), static_cast<std::size_t>(ny))) continue;
        parent[find(y * w + x)] = find(static_cast<std::size_t>(ny) * w + static_cast<std::size_t>(nx));
      }
    }
  std::size_t count = 0;
  for (std::size_t p = 0; p < w * h; ++p) {
    if (img.pixels[p] >= tau && find(p) == p) ++count;
  }
  return count;
}

/// Midpoint Riemann sum of f over [a, b] with n cells.
inline double riemann_sum(const std::function<double(double)>& f, double a, double b, std::size_t n) {
  const double h = (b - a) / static_cast<double>(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += f(a + h * (static_cast<double>(i) + 0.5));
  return s * h;
}

}  // namespace irstd::testing
