#pragma once

#include <cmath>

namespace probitda {

inline constexpr double kSqrt2 = 1.4142135623730951;
inline constexpr double kInvSqrt2Pi = 0.3989422804014327;
inline constexpr double kSqrt2OverPi = 0.7978845608028654;

/// Standard normal density.
inline double norm_pdf(double x) {
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

/// Standard normal distribution function.
inline double norm_cdf(double x) {
  return 0.5 * std::erfc(-x / kSqrt2);
}

/// Scaled complementary error function exp(x^2) erfc(x) for x >= 0.
/// Direct product until exp(x^2) nears overflow, asymptotic series beyond.
inline double erfcx_nonneg(double x) {
  if (x <= 25.0) return std::exp(x * x) * std::erfc(x);
  // erfcx(x) ~ (1/(x sqrt(pi))) sum (-1)^k (2k-1)!! / (2x^2)^k
  const double ix2 = 1.0 / (2.0 * x * x);
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 5; ++k) {
    term *= -(2.0 * k - 1.0) * ix2;
    sum += term;
  }
  return sum / (x * 1.7724538509055159);
}

/// Hazard rate phi(x) / (1 - Phi(x)), stable for large positive x where
/// both numerator and denominator underflow.
inline double normal_hazard(double x) {
  if (x < 8.0) return norm_pdf(x) / (0.5 * std::erfc(x / kSqrt2));
  return kSqrt2OverPi / erfcx_nonneg(x / kSqrt2);
}

/// Inverse Mills ratio phi(x) / Phi(x); equals normal_hazard(-x).
inline double inverse_mills(double x) { return normal_hazard(-x); }

/// log Phi(x), stable in the left tail where Phi underflows.
inline double log_norm_cdf(double x) {
  if (x > -8.0) return std::log(norm_cdf(x));
  return -0.5 * x * x - 0.6931471805599453 +
         std::log(erfcx_nonneg(-x / kSqrt2));
}

struct TruncMoments {
  double mean;
  double var;
};

/// Mean and variance of Z | Z > a for standard normal Z.
/// mean = h(a), var = 1 + a h(a) - h(a)^2. For deep truncation the
/// variance formula loses all significant digits to cancellation, so a
/// series in 1/a takes over: h(a) = a + 1/a - 2/a^3 + 10/a^5 - 74/a^7 + ...
inline TruncMoments lower_truncated_std_moments(double a) {
  if (a > 300.0) {
    const double ia = 1.0 / a, ia2 = ia * ia;
    const double r = ia * (1.0 + ia2 * (-2.0 + ia2 * (10.0 - 74.0 * ia2)));
    return {a + r, 1.0 - a * r - r * r};
  }
  const double h = normal_hazard(a);
  double var = 1.0 + a * h - h * h;
  if (var < 0.0) var = 0.0;
  if (var > 1.0) var = 1.0;
  return {h, var};
}

/// Mean and variance of TN(xi, 1, omega): N(xi,1) restricted to (0,inf)
/// when omega = 1 and to (-inf,0] when omega = 0.
inline TruncMoments truncated_normal_moments(double xi, bool omega) {
  if (omega) {
    const TruncMoments m = lower_truncated_std_moments(-xi);
    return {xi + m.mean, m.var};
  }
  // TN(xi,1,0) = -TN(-xi,1,1)
  const TruncMoments m = lower_truncated_std_moments(xi);
  return {xi - m.mean, m.var};
}

}  // namespace probitda
