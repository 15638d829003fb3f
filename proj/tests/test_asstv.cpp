#include <gtest/gtest.h>

#include "irstd/asstv.hpp"
#include "irstd/fft.hpp"
#include "irstd/testing/oracles.hpp"

namespace irstd {
namespace {

using testing::random_tensor;
using testing::vectorize;

TEST(DiffTest, ConstantGivesZero) {
  const Tensor3 c(3, 4, 2, std::vector<double>(24, 1.5));
  for (Axis a : kAllAxes) {
    EXPECT_EQ(norm(diff(c, a)), 0.0);
    EXPECT_EQ(norm(diff(c, a, true)), 0.0);
  }
}

TEST(DiffTest, HorizontalWrapsAround) {
  const Tensor3 d = diff(Tensor3(3, 1, 1, {0.0, 1.0, 2.0}), Axis::horizontal);
  EXPECT_EQ(d(0, 0, 0), 1.0);
  EXPECT_EQ(d(1, 0, 0), 1.0);
  EXPECT_EQ(d(2, 0, 0), -2.0);
}

TEST(DiffTest, AdjointIdentity) {
  Rng rng(51);
  const Tensor3 a = random_tensor(rng, 5, 4, 3), b = random_tensor(rng, 5, 4, 3);
  for (Axis axis : kAllAxes) EXPECT_NEAR(inner(diff(a, axis), b), inner(a, diff(b, axis, true)), 1e-12);
}

TEST(DiffTest, MatchesDenseStencil) {
  Rng rng(52);
  const Tensor3 a = random_tensor(rng, 4, 3, 5);
  for (int axis = 0; axis < 3; ++axis) {
    const Eigen::MatrixXd d = testing::difference_stencil(4, 3, 5, axis);
    EXPECT_LE((vectorize(diff(a, kAllAxes[axis])) - d * vectorize(a)).norm(), 1e-13);
    EXPECT_LE((vectorize(diff(a, kAllAxes[axis], true)) - d.transpose() * vectorize(a)).norm(), 1e-13);
  }
}

TEST(AsstvNormTest, ConstantIsZero) { EXPECT_EQ(asstv_norm(Tensor3(3, 3, 3, std::vector<double>(27, 2.0)), 1.0), 0.0); }

TEST(AsstvNormTest, Impulse) {
  Tensor3 a(3, 3, 3);
  a(2, 2, 2) = 1.0;
  EXPECT_DOUBLE_EQ(asstv_norm(a, 1.0), 6.0);
  EXPECT_DOUBLE_EQ(asstv_norm(a, 2.0), 8.0);
}

TEST(AsstvNormTest, ZeroDeltaDropsTemporalTerm) {
  Rng rng(53);
  const Tensor3 a = random_tensor(rng, 4, 4, 3);
  const double spatial = norm(diff(a, Axis::horizontal), NormKind::l1) + norm(diff(a, Axis::vertical), NormKind::l1);
  EXPECT_NEAR(asstv_norm(a, 0.0), spatial, 1e-12);
  EXPECT_NEAR(asstv_norm(a, 1e-12), spatial, 1e-9);
  EXPECT_THROW(asstv_norm(a, -1.0), Error);
}

TEST(SpectrumTest, SingletonAxisIsZero) {
  const OperatorSpectrum s = operator_spectrum(4, 1, 3);
  EXPECT_EQ(norm(s[Axis::vertical]), 0.0);
}

TEST(SpectrumTest, LengthFourMagnitudes) {
  const OperatorSpectrum s = operator_spectrum(4, 1, 1);
  const double expected[4] = {0.0, 2.0, 4.0, 2.0};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::norm(s[Axis::horizontal](i, 0, 0)), expected[i], 1e-14);
}

TEST(SpectrumTest, SumOfSquaresIsTwiceLength) {
  for (std::size_t n : {2u, 3u, 5u, 8u}) {
    const OperatorSpectrum s = operator_spectrum(1, 1, n);
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) total += std::norm(s[Axis::temporal](0, 0, k));
    EXPECT_NEAR(total, 2.0 * static_cast<double>(n), 1e-12);
  }
}

TEST(SpectrumTest, DiagonalizesDifferences) {
  Rng rng(54);
  const Tensor3 a = random_tensor(rng, 5, 4, 3);
  const OperatorSpectrum s = operator_spectrum(5, 4, 3);
  const CTensor3 fa = fft3(a);
  for (Axis axis : kAllAxes) {
    const CTensor3 fd = fft3(diff(a, axis));
    double err = 0.0;
    for (std::size_t n = 0; n < fa.size(); ++n) err = std::max(err, std::abs(fd.data()[n] - s[axis].data()[n] * fa.data()[n]));
    EXPECT_LE(err, 1e-12);
  }
}

TEST(SpectrumTest, DenominatorAtLeastTwo) {
  const Tensor3 d = operator_spectrum(3, 4, 5).denominator();
  for (double v : d.data()) EXPECT_GE(v, 2.0);
}

}  // namespace
}  // namespace irstd
