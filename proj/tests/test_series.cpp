// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "parabolica/series.hpp"

using namespace parabolica;
using RealSeries = TruncatedSeries<double>;

namespace {

RealSeries small_int_series(std::mt19937& rng, int K, bool zero_constant) {
  std::uniform_int_distribution<int> d(-3, 3);
  RealSeries s(K);
  for (int k = zero_constant ? 1 : 0; k <= K; ++k) s[k] = d(rng);
  return s;
}

Series small_complex_series(std::mt19937& rng, int K) {
  std::uniform_real_distribution<double> d(-0.5, 0.5);
  Series s(K);
  for (int k = 1; k <= K; ++k) s[k] = cplx(d(rng), d(rng));
  return s;
}

}  // namespace

TEST(Series, ProductIsExactlyAssociative) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = small_int_series(rng, 12, false);
    const auto t = small_int_series(rng, 12, false);
    const auto u = small_int_series(rng, 12, false);
    EXPECT_EQ(((s * t) * u).coefficients(), (s * (t * u)).coefficients());
  }
}

TEST(Series, CompositionIsAssociative) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = small_complex_series(rng, 10);
    const auto g = small_complex_series(rng, 10);
    const auto h = small_complex_series(rng, 10);
    const auto a = f.compose(g).compose(h);
    const auto b = f.compose(g.compose(h));
    for (int k = 0; k <= 10; ++k) EXPECT_LT(std::abs(a[k] - b[k]), 1e-12);
  }
}

TEST(Series, ReciprocalOfGeometric) {
  RealSeries s(8);
  s[0] = 1.0;
  s[1] = -1.0;
  const auto r = s.reciprocal();
  for (int k = 0; k <= 8; ++k) EXPECT_DOUBLE_EQ(r[k], 1.0);
  EXPECT_THROW(RealSeries(4).reciprocal(), DomainError);
}

TEST(Series, LogOfOnePlusZ) {
  RealSeries s(10);
  s[0] = 1.0;
  s[1] = 1.0;
  const auto l = s.log1();
  for (int k = 1; k <= 10; ++k) EXPECT_NEAR(l[k], (k % 2 ? 1.0 : -1.0) / k, 1e-15);
}

TEST(Series, PowerMatchesBinomial) {
  RealSeries s(6);
  s[0] = 1.0;
  s[1] = 1.0;
  const auto p = s.pow(5);
  const double c[] = {1, 5, 10, 10, 5, 1, 0};
  for (int k = 0; k <= 6; ++k) EXPECT_DOUBLE_EQ(p[k], c[k]);
}

TEST(Series, ComposeRejectsNonzeroConstant) {
  RealSeries a(3), b(3);
  b[0] = 1.0;
  EXPECT_THROW(a.compose(b), DomainError);
  EXPECT_THROW(a + RealSeries(4), DomainError);
}

TEST(Series, EvalHorner) {
  RealSeries s(3, {1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(s.eval(2.0), 1 + 4 + 12 + 32);
}
