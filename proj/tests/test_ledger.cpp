// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <chrono>
#include <set>

#include "parabolica/ledger.hpp"

using namespace parabolica;

namespace {

double value_of_label(const CheckResult& r, const std::string& label) {
  for (std::size_t k = 0; k < r.labels.size(); ++k)
    if (r.labels[k] == label) return r.computed[k];
  ADD_FAILURE() << "missing label " << label << " in " << r.name;
  return NAN;
}

}  // namespace

TEST(Ledger, EveryCheckPasses) {
  for (const auto& r : run_all()) {
    EXPECT_TRUE(r.pass) << r.name << (r.m ? " m=" + std::to_string(*r.m) : "");
    EXPECT_GT(r.min_margin(), 0.0) << r.name;
    for (std::size_t k = 0; k < r.computed.size(); ++k)
      EXPECT_LE(std::fabs(r.computed[k] - r.printed[k]), r.rel_tol * std::max(1.0, std::fabs(r.printed[k])))
          << r.name << " " << r.labels[k];
  }
}

TEST(Ledger, DenseSamplingPasses) {
  for (const auto& r : run_all(true)) EXPECT_TRUE(r.pass) << r.name;
}

TEST(Ledger, RunsUnderOneSecondAndIsDeterministic) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto a = run_all();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 1.0);
  EXPECT_GE(a.size(), 7u);
  const auto b = run_all();
  ASSERT_EQ(a.size(), b.size());
  std::set<std::string> names;
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].computed, b[k].computed);
    names.insert(a[k].name + (a[k].m ? std::to_string(*a[k].m) : ""));
  }
  EXPECT_EQ(names.size(), a.size());
}

TEST(Ledger, EllipseAxes) {
  EllipseSpec e;
  EXPECT_DOUBLE_EQ(e.a(), 1.44);
  e.r = 1.4;
  EXPECT_NEAR(e.a(), 1.60457, 1e-5);
  EXPECT_NEAR(e.b(), 0.747429, 1e-5);
}

TEST(Ledger, BoundaryMinimumAgreesWithSampling) {
  struct Q {
    double a, b, c, d;
  };
  for (const Q q : {Q{0.5, 0.2, 1.0, -0.1}, Q{2.0, -0.3, 0.5, 0.0}, Q{-1.0, 0.8, 1.5, 0.2}, Q{0.1, 0.0, 2.0, 1.0}}) {
    const double exact = detail::boundary_functional_min(q.a, q.b, q.c, q.d);
    const double sampled = detail::sampled_min(q.a, q.b, q.c, q.d, 200001);
    EXPECT_NEAR(exact, sampled, 1e-8);
  }
}

TEST(Ledger, SectorQuartics) {
  auto p1 = [](double m) { return 1034.91 + 4872.17 * m + 6385.74 * m * m + 1274.23 * m * m * m - 478.305 * m * m * m * m; };
  auto p2 = [](double m) { return 17871.7 + 36651 * m + 28649.2 * m * m + 6001.32 * m * m * m - 336.64 * m * m * m * m; };
  EXPECT_NEAR(p1(6), -84495, 1.0);
  EXPECT_GT(p1(5), 0.0);
  EXPECT_LT(p2(22), 0.0);
  const auto r = check_sector_polynomials();
  EXPECT_TRUE(r.pass);
}

TEST(Ledger, W1ChainValue) {
  const auto r = check_W1_connected(22);
  EXPECT_NEAR(value_of_label(r, r.labels.front()), std::pow(23.0 / 22.0, 22), 1e-12);
  EXPECT_NEAR(std::pow(23.0 / 22.0, 22), 2.65897, 1e-5);
}

TEST(Ledger, BetaMaxCases) {
  for (int m : {3, 4, 22, 50}) EXPECT_TRUE(check_beta_max(m).pass) << m;
}

TEST(Ledger, PreconditionsEnforced) {
  EXPECT_THROW(check_covering_constants(2), DomainError);
  EXPECT_THROW(check_phi_att_bounds(21), DomainError);
  EXPECT_THROW(check_W1_connected(10), DomainError);
  EXPECT_THROW(check_sector_mapping(4), DomainError);
}
