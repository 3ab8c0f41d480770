// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "parabolica/contfrac.hpp"

using namespace parabolica;
using Big = boost::multiprecision::cpp_bin_float_50;

TEST(ContFrac, GoldenMeanEntries) {
  const auto d = expand((std::sqrt(5.0) - 1.0) / 2.0, 10);
  const std::vector<std::int64_t> want{0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
  EXPECT_EQ(d.entries, want);
  EXPECT_FALSE(d.terminated);
}

TEST(ContFrac, RationalTerminates) {
  const auto d = expand(3.0 / 7.0, 5);
  EXPECT_EQ(d.entries, (std::vector<std::int64_t>{0, 2, 3}));
  EXPECT_TRUE(d.terminated);
}

TEST(ContFrac, PiEntries) {
  const auto d = expand(3.14159265358979323846, 4);
  EXPECT_EQ(d.entries, (std::vector<std::int64_t>{3, 7, 15, 1, 292}));
}

TEST(ContFrac, PrecisionGuardStopsEarly) {
  const auto d = expand(std::sqrt(2.0) - 1.0, 200);
  EXPECT_TRUE(d.precision_exhausted);
  EXPECT_LT(d.entries.size(), 200u);
  for (std::size_t k = 1; k < d.entries.size(); ++k) EXPECT_EQ(d.entries[k], 2);
}

TEST(ContFrac, FibonacciDenominators) {
  const auto d = golden_mean(30);
  BigInt a = 1, b = 1;
  for (std::size_t k = 0; k < d.convergents.size(); ++k) {
    EXPECT_EQ(d.convergents[k].q, a) << k;
    const BigInt c = a + b;
    a = b;
    b = c;
  }
}

TEST(ContFrac, ConvergentsOf355Over113) {
  const auto c = convergents({3, 7, 15, 1});
  EXPECT_EQ(c[3].p, 355);
  EXPECT_EQ(c[3].q, 113);
}

TEST(ContFrac, DeterminantIdentityExactPastInt64) {
  std::vector<std::int64_t> e{0};
  for (int k = 1; k <= 40; ++k) e.push_back(1000 + k);
  const auto c = convergents(e);
  EXPECT_GT(c.back().q, BigInt(std::numeric_limits<std::int64_t>::max()));
  for (std::size_t k = 1; k < c.size(); ++k) {
    const BigInt det = c[k].q * c[k - 1].p - c[k].p * c[k - 1].q;
    EXPECT_EQ(det, (k % 2 == 0) ? 1 : -1) << k;
  }
  EXPECT_THROW(convergents({0, 0}), DomainError);
}

TEST(ContFrac, AlphaFromTailIdentityAndApproximationBounds) {
  for (const auto& d : {golden_mean(40), expand(3.14159265358979323846 - 3.0, 12),
                        from_entries({0, 2, 3, 1, 4, 1, 5, 9, 2, 6}, periodic_tail(3))}) {
    const long double alpha = value_of(d);
    const std::size_t K = std::min<std::size_t>(d.alphas.size(), d.convergents.size()) - 1;
    for (std::size_t k = 1; k <= K; ++k) {
      const long double pk = d.convergents[k].p.convert_to<long double>();
      const long double qk = d.convergents[k].q.convert_to<long double>();
      const long double pm = d.convergents[k - 1].p.convert_to<long double>();
      const long double qm = d.convergents[k - 1].q.convert_to<long double>();
      const long double ak = d.alphas[k];
      EXPECT_NEAR(static_cast<double>((pk + pm * ak) / (qk + qm * ak)), static_cast<double>(alpha), 1e-12) << k;
      if (k + 1 < d.convergents.size()) {
        const long double qn = d.convergents[k + 1].q.convert_to<long double>();
        const long double gap = std::fabs(alpha - pk / qk);
        if (gap > 1e-17L) {
          EXPECT_LT(1.0L / (2.0L * qk * qn), gap) << k;
          EXPECT_LT(gap, 1.0L / (qk * qn)) << k;
        }
      }
    }
  }
}

TEST(ContFrac, BetaIsProductOfAlphas) {
  const auto d = golden_mean(40);
  const long double g = periodic_tail(1);
  for (std::size_t k = 0; k < d.betas.size(); ++k)
    EXPECT_NEAR(static_cast<double>(d.betas[k]), std::pow(static_cast<double>(g), k + 1.0), 1e-12);
  // 1/(q_{k+1} + q_k) < beta_k < 1/q_{k+1}
  for (std::size_t k = 0; k + 1 < d.convergents.size(); ++k) {
    const long double q1 = d.convergents[k + 1].q.convert_to<long double>();
    const long double q0 = d.convergents[k].q.convert_to<long double>();
    EXPECT_LT(d.betas[k], 1.0L / q1);
    EXPECT_GT(d.betas[k], 1.0L / (q1 + q0));
  }
}

TEST(ContFrac, ConvergentsAreReduced) {
  for (const auto& c : expand(3.14159265358979323846, 12).convergents) EXPECT_EQ(boost::multiprecision::gcd(c.p, c.q), 1);
}

TEST(ContFrac, BrjunoGoldenConverges) {
  const auto d = golden_mean(60);
  const auto s = brjuno_partial_sums(d, 50);
  const double g = static_cast<double>(periodic_tail(1));
  for (std::size_t k = 1; k < s.size(); ++k) {
    const double inc = static_cast<double>(s[k] - s[k - 1]);
    EXPECT_GE(inc, 0.0);
    // beta_{k-1} = g^k < 1/q_k bounds every increment
    EXPECT_NEAR(inc, std::pow(g, k) * std::log(1.0 / g), 1e-15);
    EXPECT_LT(inc, std::log(1.0 / g) / d.convergents[k].q.convert_to<double>());
  }
  EXPECT_NEAR(static_cast<double>(s.back()), std::log(1.0 / g) / (1.0 - g), 1e-10);
}

TEST(ContFrac, BrjunoDepthZero) {
  EXPECT_NEAR(brjuno_sum(0.3, 0), std::log(1.0 / 0.3), 1e-15);
}

TEST(ContFrac, BrjunoConstantTenFinite) {
  // a_k = 10: beta_k = t^{k+1}, every term is t^k log(1/t)
  const long double t = periodic_tail(10);
  const auto d = from_entries(std::vector<std::int64_t>(41, 10), t);
  const double closed = static_cast<double>(std::log(1.0L / t) / (1.0L - t));
  EXPECT_NEAR(brjuno_sum(d, 40), closed, 1e-12);
}

TEST(ContFrac, BrjunoRejectsRational) {
  EXPECT_THROW(brjuno_sum(0.375, 5), DomainError);
}

TEST(ContFrac, BoundedType) {
  const auto g = golden_mean(20).entries;
  EXPECT_TRUE(is_in_SN(g, 1).in_SN);
  EXPECT_FALSE(is_in_SN(g, 2).in_SN);
  const auto r = is_in_SN({0, 5, 7, 5, 9, 6, 8}, 5, 9);
  EXPECT_TRUE(r.in_SN);
  EXPECT_EQ(r.depth_checked, 6u);
  EXPECT_FALSE(is_in_SN({0, 5, 10}, 5, 9).in_SN);
}

TEST(ContFrac, EpsilonSignRule) {
  for (int n = 1; n <= 6; ++n) {
    PerturbedSequenceSpec s{golden_mean(10).entries, 20, 3, n};
    const double e = epsilon_n(s, static_cast<double>(periodic_tail(3)));
    EXPECT_EQ(e > 0.0, n % 2 == 0) << n;
  }
}

TEST(ContFrac, EpsilonMatchesExtendedPrecisionDifference) {
  const PerturbedSequenceSpec s{golden_mean(10).entries, 100, 1, 5};
  const auto e = s.entries();
  // alpha_n = [0; 1,1,1,1,1, 100 + gamma] evaluated in 50 digits
  Big t = (boost::multiprecision::sqrt(Big(5)) - 1) / 2;
  t = Big(e.back()) + t;
  for (std::size_t k = e.size() - 1; k-- > 1;) t = Big(e[k]) + 1 / t;
  const Big alpha_n = Big(e[0]) + 1 / t;
  const auto cv = convergents(std::vector<std::int64_t>(e.begin(), e.begin() + 6));
  const Big pq = Big(cv.back().p.convert_to<double>()) / Big(cv.back().q.convert_to<double>());
  const double oracle = static_cast<double>(alpha_n - pq);
  EXPECT_NEAR(epsilon_n(s, static_cast<double>(periodic_tail(1))), oracle, 1e-14 * std::abs(oracle) + 1e-18);
  EXPECT_NEAR(s.value() - static_cast<double>(pq), oracle, 1e-14);
}

TEST(ContFrac, EpsilonAsymptotic) {
  const auto base = golden_mean(10).entries;
  const auto q = convergents(std::vector<std::int64_t>(base.begin(), base.begin() + 5)).back().q.convert_to<double>();
  double prev = 0.0;
  for (std::int64_t A : {10, 1000, 100000, 10000000}) {
    const PerturbedSequenceSpec s{base, A, 1, 4};
    const double r = q * q * static_cast<double>(A) * std::abs(epsilon_n(s, 0.5));
    EXPECT_LT(std::abs(r - 1.0), std::abs(prev - 1.0) + (prev == 0.0 ? 1.0 : 0.0));
    prev = r;
  }
  EXPECT_NEAR(prev, 1.0, 1e-6);
}

TEST(ContFrac, PerturbedSpecValidation) {
  EXPECT_THROW((PerturbedSequenceSpec{{0, 1, 1}, 10, 1, 5}.validate()), DomainError);
  EXPECT_THROW((PerturbedSequenceSpec{{0, 1, 1}, 0, 1, 1}.validate()), DomainError);
  EXPECT_THROW((PerturbedSequenceSpec{{0, 1, 1}, 5, 0, 1}.validate()), DomainError);
  const PerturbedSequenceSpec ok{{0, 1, 1, 1}, 7, 2, 2};
  EXPECT_EQ(ok.entries(2), (std::vector<std::int64_t>{0, 1, 1, 7, 2, 2}));
  EXPECT_FALSE(ok.data().terminated);
}

TEST(ContFrac, LogGrowthRatio) {
  EXPECT_NEAR(log_growth_ratio(100, BigInt(2)), std::sqrt(std::log(100.0)), 1e-15);
  EXPECT_THROW(log_growth_ratio(1, BigInt(2)), DomainError);
}
