#include <gtest/gtest.h>

#include <cmath>

#include "irstd/fft.hpp"
#include "irstd/tensor.hpp"
#include "irstd/testing/oracles.hpp"
#include "irstd/tproduct.hpp"

namespace irstd {
namespace {

using testing::dense_t_product;
using testing::random_tensor;

Tensor3 tube(std::vector<double> values) {
  const std::size_t n = values.size();
  return Tensor3(1, 1, n, std::move(values));
}

TEST(Tensor3Test, ConstructorRejectsWrongLength) {
  try {
    Tensor3(2, 2, 2, std::vector<double>(7, 0.0));
    FAIL() << "expected an exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Tensor3Test, ConstructorRejectsNonFinite) {
  std::vector<double> v(8, 1.0);
  v[3] = std::nan("");
  try {
    Tensor3(2, 2, 2, v);
    FAIL() << "expected an exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFinite);
  }
  v[3] = INFINITY;
  EXPECT_THROW(Tensor3(2, 2, 2, v), Error);
}

TEST(Tensor3Test, SliceMajorLayout) {
  Tensor3 a(2, 3, 2);
  a(1, 2, 1) = 5.0;
  EXPECT_EQ(a.data()[1 + 2 * (2 + 3 * 1)], 5.0);
  EXPECT_EQ(a.slice(1)(1, 2), 5.0);
}

TEST(Tensor3Test, ArithmeticRequiresSameShape) {
  Tensor3 a(2, 2, 2), b(2, 2, 3);
  EXPECT_THROW(a += b, Error);
}

TEST(NormTest, AllOnes) {
  const Tensor3 a(2, 2, 2, std::vector<double>(8, 1.0));
  EXPECT_DOUBLE_EQ(norm(a), std::sqrt(8.0));
  EXPECT_DOUBLE_EQ(norm(a, NormKind::l1), 8.0);
}

TEST(NormTest, L21OfColumns) {
  // [[3, 0], [4, 0]] stored column-major: column 0 = (3, 4)
  const Tensor3 a(2, 2, 1, {3.0, 4.0, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(norm(a, NormKind::l21), 5.0);
  EXPECT_EQ(norm(Tensor3(3, 4, 2), NormKind::l21), 0.0);
}

TEST(NormTest, L21SumsLateralSlices) {
  Rng rng(7);
  const Tensor3 a = random_tensor(rng, 3, 4, 2);
  double expected = 0.0;
  for (std::size_t j = 0; j < 4; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < 2; ++k)
      for (std::size_t i = 0; i < 3; ++i) s += a(i, j, k) * a(i, j, k);
    expected += std::sqrt(s);
  }
  EXPECT_NEAR(norm(a, NormKind::l21), expected, 1e-12);
}

TEST(FftTest, ConstantTube) {
  const CTensor3 f = fft_mode3(tube({2.0, 2.0, 2.0}));
  EXPECT_NEAR(std::abs(f(0, 0, 0) - cdouble(6.0, 0.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(f(0, 0, 1)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(f(0, 0, 2)), 0.0, 1e-14);
}

TEST(FftTest, ImpulseTube) {
  const CTensor3 f = fft_mode3(tube({1.0, 0.0, 0.0, 0.0}));
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(f(0, 0, k) - cdouble(1.0, 0.0)), 0.0, 1e-14);
}

TEST(FftTest, SingleSliceIsIdentity) {
  Rng rng(3);
  const Tensor3 a = random_tensor(rng, 3, 4, 1);
  const CTensor3 f = fft_mode3(a);
  for (std::size_t n = 0; n < a.size(); ++n) EXPECT_EQ(f.data()[n], cdouble(a.data()[n], 0.0));
}

TEST(FftTest, InverseOfConstantSpectrum) {
  CTensor3 f(1, 1, 3);
  f(0, 0, 0) = 6.0;
  const Tensor3 t = ifft_mode3(f);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(t(0, 0, k), 2.0, 1e-14);
}

TEST(FftTest, RoundTrip) {
  Rng rng(11);
  const Tensor3 a = random_tensor(rng, 4, 4, 5);
  EXPECT_LE(norm(ifft_mode3(fft_mode3(a)) - a), 1e-12);
  EXPECT_EQ(ifft_mode3(fft_mode3(Tensor3(3, 2, 4))), Tensor3(3, 2, 4));
}

TEST(FftTest, Parseval) {
  Rng rng(12);
  for (std::size_t n3 = 1; n3 <= 6; ++n3) {
    const Tensor3 a = random_tensor(rng, 3, 5, n3);
    EXPECT_NEAR(squared_norm(fft_mode3(a)) / static_cast<double>(n3), squared_norm(a), 1e-12 * squared_norm(a));
  }
}

TEST(FftTest, ImaginaryResidueIsRejected) {
  CTensor3 f(1, 1, 3);
  f(0, 0, 1) = cdouble(1.0, 0.0);  // no conjugate partner in slice 2
  try {
    ifft_mode3(f);
    FAIL() << "expected an exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ImaginaryResidueTooLarge);
  }
}

TEST(Fft3Test, RoundTripAndParseval) {
  Rng rng(13);
  const Tensor3 a = random_tensor(rng, 5, 4, 3);
  EXPECT_LE(norm(ifft3(fft3(a)) - a), 1e-12);
  EXPECT_NEAR(squared_norm(fft3(a)) / 60.0, squared_norm(a), 1e-12);
}

TEST(BcircTest, TubeUnrolled) {
  const Eigen::MatrixXd m = bcirc_oracle(tube({2.0, 7.0}));
  Eigen::MatrixXd expected(2, 2);
  expected << 2.0, 7.0, 7.0, 2.0;
  EXPECT_EQ(m, expected);
}

TEST(BcircTest, IdentityAndSingleSlice) {
  EXPECT_EQ(bcirc_oracle(Tensor3::identity(3, 4)), Eigen::MatrixXd::Identity(12, 12));
  Rng rng(4);
  const Tensor3 a = random_tensor(rng, 3, 2, 1);
  EXPECT_EQ(bcirc_oracle(a), Eigen::MatrixXd(a.slice(0)));
}

TEST(TProductTest, TubeExample) {
  // bcirc((0,1)) = [[0,1],[1,0]] applied to (2,3)
  const Tensor3 c = t_product(tube({0.0, 1.0}), tube({2.0, 3.0}));
  EXPECT_NEAR(c(0, 0, 0), 3.0, 1e-14);
  EXPECT_NEAR(c(0, 0, 1), 2.0, 1e-14);
}

TEST(TProductTest, IdentityIsNeutral) {
  Rng rng(5);
  for (std::size_t n3 : {1u, 2u, 3u, 4u}) {
    const Tensor3 a = random_tensor(rng, 3, 4, n3);
    EXPECT_LE(norm(t_product(a, Tensor3::identity(4, n3)) - a), 1e-13);
    EXPECT_LE(norm(t_product(Tensor3::identity(3, n3), a) - a), 1e-13);
  }
}

TEST(TProductTest, MatchesBlockCirculantOracle) {
  Rng rng(6);
  const Tensor3 a = random_tensor(rng, 3, 2, 2), b = random_tensor(rng, 2, 2, 2);
  EXPECT_LE(norm(t_product(a, b) - dense_t_product(a, b)), 1e-10 * norm(dense_t_product(a, b)));
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n1 = 1 + rng.next_u64() % 6, n2 = 1 + rng.next_u64() % 6, l = 1 + rng.next_u64() % 6;
    const std::size_t n3 = 1 + rng.next_u64() % 7;
    const Tensor3 x = random_tensor(rng, n1, n2, n3), y = random_tensor(rng, n2, l, n3);
    const Tensor3 expected = dense_t_product(x, y);
    EXPECT_LE(norm(t_product(x, y) - expected), 1e-10 * norm(expected)) << n1 << "x" << n2 << "x" << n3;
  }
}

TEST(TProductTest, SingleSliceIsMatrixProduct) {
  Rng rng(8);
  const Tensor3 a = random_tensor(rng, 4, 3, 1), b = random_tensor(rng, 3, 5, 1);
  const Eigen::MatrixXd expected = a.slice(0) * b.slice(0);
  EXPECT_LE((Eigen::MatrixXd(t_product(a, b).slice(0)) - expected).norm(), 1e-13);
}

TEST(TProductTest, Associative) {
  Rng rng(9);
  const Tensor3 a = random_tensor(rng, 3, 4, 5), b = random_tensor(rng, 4, 2, 5), c = random_tensor(rng, 2, 3, 5);
  const Tensor3 left = t_product(t_product(a, b), c);
  EXPECT_LE(norm(left - t_product(a, t_product(b, c))), 1e-12 * norm(left));
}

TEST(TProductTest, ShapeMismatchThrows) {
  try {
    t_product(Tensor3(2, 3, 2), Tensor3(2, 3, 2));
    FAIL() << "expected an exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
  EXPECT_THROW(t_product(Tensor3(2, 3, 2), Tensor3(3, 3, 3)), Error);
}

TEST(ConjTransposeTest, SingleSliceIsTranspose) {
  Rng rng(10);
  const Tensor3 a = random_tensor(rng, 3, 5, 1);
  EXPECT_EQ(Eigen::MatrixXd(conj_transpose(a).slice(0)), Eigen::MatrixXd(a.slice(0).transpose()));
}

TEST(ConjTransposeTest, Involution) {
  Rng rng(14);
  const Tensor3 a = random_tensor(rng, 3, 2, 4);
  EXPECT_EQ(conj_transpose(conj_transpose(a)), a);
}

TEST(ConjTransposeTest, ReversesProducts) {
  Rng rng(15);
  const Tensor3 a = random_tensor(rng, 3, 2, 2), b = random_tensor(rng, 2, 4, 2);
  const Tensor3 lhs = conj_transpose(t_product(a, b));
  EXPECT_LE(norm(lhs - t_product(conj_transpose(b), conj_transpose(a))), 1e-10);
}

TEST(ConjTransposeTest, MatchesTransposedBlockCirculant) {
  Rng rng(16);
  const Tensor3 a = random_tensor(rng, 3, 2, 4);
  EXPECT_LE((bcirc_oracle(conj_transpose(a)) - bcirc_oracle(a).transpose()).norm(), 1e-15);
}

TEST(FoldTest, RoundTrip) {
  Rng rng(17);
  const Tensor3 a = random_tensor(rng, 3, 4, 5);
  EXPECT_EQ(fold(unfold(a), 3, 5), a);
  EXPECT_THROW(fold(unfold(a), 4, 5), Error);
}

TEST(SoftThresholdTest, ScalarCases) {
  EXPECT_DOUBLE_EQ(soft_threshold(0.7, 0.5), 0.7 - 0.5);
  EXPECT_DOUBLE_EQ(soft_threshold(-0.7, 0.5), -(0.7 - 0.5));
  EXPECT_EQ(soft_threshold(0.3, 0.5), 0.0);
}

TEST(InnerTest, MatchesSquaredNorm) {
  Rng rng(18);
  const Tensor3 a = random_tensor(rng, 2, 3, 4);
  EXPECT_NEAR(inner(a, a), squared_norm(a), 1e-12);
}

}  // namespace
}  // namespace irstd
