#include <doctest.h>

#include <cmath>

#include "probitda/normal.hpp"
#include "test_support.hpp"

using namespace probitda;

namespace {

// Quadrature oracle for Z | Z > a: the excess e = Z - a has density
// proportional to exp(-a e - e^2/2) on (0, inf), which stays inside
// double range for every a.
struct TailOracle {
  double mean, var, log_mass;  // log_mass = log Phi(-a)
};

TailOracle tail_oracle(double a) {
  const double L = a > 1.0 ? 60.0 / a : 60.0;
  const auto dens = [a](double e) { return std::exp(-a * e - 0.5 * e * e); };
  const auto e1 = [&](double e) { return e * dens(e); };
  const auto e2 = [&](double e) { return e * e * dens(e); };
  const double Z = oracle::simpson(dens, 0.0, L, 400000);
  const double m1 = oracle::simpson(e1, 0.0, L, 400000) / Z;
  const double m2 = oracle::simpson(e2, 0.0, L, 400000) / Z;
  const double log_mass = -0.5 * a * a - 0.9189385332046727 + std::log(Z);
  return {a + m1, m2 - m1 * m1, log_mass};
}

}  // namespace

TEST_CASE("norm_cdf matches the quadrature of the density") {
  for (double x : {-8.0, -3.0, -1.0, 0.0, 0.5, 2.0, 6.0}) {
    const double quad =
        oracle::simpson(oracle::std_normal_pdf, -40.0, x, 300000);
    CHECK(norm_cdf(x) == doctest::Approx(quad).epsilon(1e-12));
  }
  CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("normal_hazard agrees with the tail quadrature oracle") {
  for (double x : {-5.0, -1.0, 0.0, 3.0, 7.9, 8.1, 12.0, 25.0}) {
    double mass;  // 1 - Phi(x)
    if (x >= 0.0) {
      mass = std::exp(tail_oracle(x).log_mass);
    } else {
      mass = oracle::simpson(oracle::std_normal_pdf, x, 40.0, 300000);
    }
    const double expected = norm_pdf(x) / mass;
    CHECK(normal_hazard(x) == doctest::Approx(expected).epsilon(1e-11));
  }
}

TEST_CASE("normal_hazard deep-tail values satisfy the Mills series") {
  for (double x : {40.0, 100.0, 1000.0, 1e4}) {
    const double x2 = x * x;
    const double mills =
        (1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2)) / x;
    CHECK(normal_hazard(x) * mills == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("log_norm_cdf stays accurate far into the left tail") {
  for (double a : {8.0, 12.0, 20.0, 37.0, 120.0}) {
    const double expected = tail_oracle(a).log_mass;
    CHECK(log_norm_cdf(-a) == doctest::Approx(expected).epsilon(1e-10));
  }
  CHECK(log_norm_cdf(0.0) == doctest::Approx(std::log(0.5)).epsilon(1e-14));
}

TEST_CASE("truncated moments match the quadrature oracle on both sides") {
  for (double a : {-6.0, -1.0, 0.0, 0.6, 2.0, 30.0, 100.0, 400.0, 1e4}) {
    TailOracle ora{0, 0, 0};
    if (a >= -1.0) {
      ora = tail_oracle(a);
    } else {
      // mild truncation: integrate the normal density directly
      const double Z =
          oracle::simpson(oracle::std_normal_pdf, a, 40.0, 400000);
      const auto m1f = [](double t) { return t * oracle::std_normal_pdf(t); };
      const auto m2f = [](double t) {
        return t * t * oracle::std_normal_pdf(t);
      };
      const double m1 = oracle::simpson(m1f, a, 40.0, 400000) / Z;
      const double m2 = oracle::simpson(m2f, a, 40.0, 400000) / Z;
      ora = {m1, m2 - m1 * m1, std::log(Z)};
    }
    const TruncMoments got = lower_truncated_std_moments(a);
    CHECK(got.mean == doctest::Approx(ora.mean).epsilon(1e-9));
    CHECK(got.var == doctest::Approx(ora.var).epsilon(1e-6));
  }
}

TEST_CASE("truncated_normal_moments respects the side convention") {
  for (double xi : {-2.0, 0.0, 1.5}) {
    const TruncMoments pos = truncated_normal_moments(xi, true);
    const TruncMoments neg = truncated_normal_moments(-xi, false);
    CHECK(pos.mean == doctest::Approx(-neg.mean).epsilon(1e-13));
    CHECK(pos.var == doctest::Approx(neg.var).epsilon(1e-13));
    CHECK(pos.mean > xi);
  }
  // second-moment identity E U^2 = 1 + xi^2 + xi phi(xi)/Phi(xi)
  for (double xi : {-6.0, -1.0, 0.0, 2.0}) {
    const TruncMoments m = truncated_normal_moments(xi, true);
    const double second = m.var + m.mean * m.mean;
    const double expected = 1.0 + xi * xi + xi * norm_pdf(xi) / norm_cdf(xi);
    CHECK(second == doctest::Approx(expected).epsilon(1e-9));
  }
}
