#include "ambivox/special.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "ambivox/error.hpp"
#include "fixtures.hpp"

namespace ambivox {
namespace {

// Composite Simpson rule on the beta integrand over [0, x], normalized by the
// complete beta function. Accurate for a >= 1 and x bounded away from 1.
double beta_by_quadrature(double x, double a, double b) {
  auto f = [&](double t) { return std::pow(t, a - 1.0) * std::pow(1.0 - t, b - 1.0); };
  auto simpson = [&](double lo, double hi) {
    const int n = 20000;
    const double h = (hi - lo) / n;
    double s = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
  };
  return simpson(0.0, x) / std::beta(a, b);
}

TEST(IncompleteBeta, MatchesReferenceValues) {
  const auto j = testing::load_json_fixture("stats_oracles.json");
  for (const auto& c : j.at("betainc")) {
    const double got = special::incomplete_beta(c["x"], c["a"], c["b"]);
    EXPECT_NEAR(got, c["value"].get<double>(), 1e-10) << c.dump();
  }
}

TEST(IncompleteBeta, MatchesDirectQuadrature) {
  for (double a : {1.0, 2.0, 3.5, 7.0}) {
    for (double b : {1.0, 1.5, 4.0, 9.0}) {
      for (double x : {0.05, 0.3, 0.5, 0.8, 0.97}) {
        EXPECT_NEAR(special::incomplete_beta(x, a, b), beta_by_quadrature(x, a, b), 1e-10)
            << "a=" << a << " b=" << b << " x=" << x;
      }
    }
  }
  // a = 1 has the closed form 1 - (1 - x)^b.
  for (double x : {0.05, 0.5, 0.97}) EXPECT_NEAR(special::incomplete_beta(x, 1.0, 1.5), 1.0 - std::pow(1.0 - x, 1.5), 1e-14);
}

TEST(IncompleteBeta, EndpointsAndSymmetry) {
  EXPECT_EQ(special::incomplete_beta(0.0, 2.0, 3.0), 0.0);
  EXPECT_EQ(special::incomplete_beta(1.0, 2.0, 3.0), 1.0);
  for (double x : {0.1, 0.4, 0.77}) {
    EXPECT_NEAR(special::incomplete_beta(x, 2.5, 4.0), 1.0 - special::incomplete_beta(1.0 - x, 4.0, 2.5), 1e-14);
  }
  EXPECT_NEAR(special::incomplete_beta(0.3, 1.0, 1.0), 0.3, 1e-15);
}

TEST(IncompleteBeta, RejectsBadArguments) {
  EXPECT_THROW(special::incomplete_beta(0.5, 0.0, 1.0), InvalidInput);
  EXPECT_THROW(special::incomplete_beta(1.5, 1.0, 1.0), InvalidInput);
  EXPECT_THROW(special::incomplete_beta(std::nan(""), 1.0, 1.0), InvalidInput);
}

TEST(FSurvival, MatchesReferenceValues) {
  const auto j = testing::load_json_fixture("stats_oracles.json");
  for (const auto& c : j.at("f_sf")) {
    EXPECT_NEAR(special::f_survival(c["f"], c["d1"], c["d2"]), c["sf"].get<double>(), 1e-10) << c.dump();
  }
}

TEST(FSurvival, ClosedFormForTwoNumeratorDegrees) {
  // For d1 = 2 the survival function is (1 + 2f/d2)^(-d2/2).
  for (double f : {0.1, 1.0, 4.68, 20.0}) {
    EXPECT_NEAR(special::f_survival(f, 2, 6), std::pow(1.0 + 2.0 * f / 6.0, -3.0), 1e-12);
  }
}

TEST(FSurvival, StrictlyDecreasingAndBounded) {
  for (auto [d1, d2] : {std::pair{1.0, 5.0}, {3.0, 12.0}, {6.0, 66.0}}) {
    double prev = 1.0;
    for (double f = 0.05; f < 40.0; f *= 1.3) {
      const double p = special::f_survival(f, d1, d2);
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
      EXPECT_LT(p, prev);
      prev = p;
    }
  }
  EXPECT_EQ(special::f_survival(0.0, 2, 3), 1.0);
  EXPECT_EQ(special::f_survival(INFINITY, 2, 3), 0.0);
}

TEST(TDistribution, TwoSidedMatchesKnownQuantile) {
  // t(0.975, 10) = 2.228138851986...
  EXPECT_NEAR(special::t_two_sided(2.2281388519649385, 10), 0.05, 1e-10);
  EXPECT_NEAR(special::t_two_sided(0.0, 4), 1.0, 1e-15);
}

TEST(NormalCdf, KnownValues) {
  EXPECT_NEAR(special::normal_cdf(0.0), 0.5, 1e-15);
  EXPECT_NEAR(special::normal_cdf(1.959963984540054), 0.975, 1e-12);
  EXPECT_NEAR(special::normal_cdf(-3.0), 0.0013498980316301, 1e-13);
}

TEST(StudentizedRange, MatchesReferenceDistribution) {
  const auto j = testing::load_json_fixture("stats_oracles.json");
  for (const auto& c : j.at("ptukey")) {
    const double got = special::ptukey(c["q"], c["k"], c["df"]);
    EXPECT_NEAR(got, c["cdf"].get<double>(), 1e-4) << c.dump();
  }
}

TEST(StudentizedRange, TwoMeansReduceToScaledT) {
  // Q for k = 2 is sqrt(2) |T|.
  for (double df : {3.0, 12.0, 40.0}) {
    for (double q : {0.5, 2.0, 4.0}) {
      EXPECT_NEAR(special::ptukey(q, 2, df), 1.0 - special::t_two_sided(q / std::sqrt(2.0), df), 1e-6);
    }
  }
}

TEST(StudentizedRange, CriticalValueMatchesPublishedTable) {
  const auto j = testing::load_json_fixture("stats_oracles.json");
  const double q = special::qtukey(0.95, 3, 12);
  EXPECT_NEAR(q, 3.77, 0.02);
  EXPECT_NEAR(q, j["qtukey_3_12_095"].get<double>(), 1e-4);
}

TEST(StudentizedRange, MonotoneInQ) {
  double prev = 0.0;
  for (double q = 0.25; q < 8.0; q += 0.25) {
    const double p = special::ptukey(q, 4, 20);
    EXPECT_GE(p, prev);
    prev = p;
  }
  EXPECT_EQ(special::ptukey(0.0, 3, 10), 0.0);
  EXPECT_THROW(special::ptukey(1.0, 1, 10), InvalidInput);
}

}  // namespace
}  // namespace ambivox
