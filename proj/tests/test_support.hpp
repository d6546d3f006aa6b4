#pragma once

// Test-only oracles, kept independent of the library code paths they
// check: plain Simpson quadrature, empirical-CDF distances, a naive
// accept-reject truncated normal, and random problem generators.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "probitda/model.hpp"

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double lo,
                      double hi, long n) {
  if (n % 2 != 0) ++n;
  const double h = (hi - lo) / static_cast<double>(n);
  double acc = f(lo) + f(hi);
  for (long i = 1; i < n; ++i) {
    acc += (i % 2 == 1 ? 4.0 : 2.0) * f(lo + h * static_cast<double>(i));
  }
  return acc * h / 3.0;
}

inline double std_normal_pdf(double x) {
  return 0.3989422804014327 * std::exp(-0.5 * x * x);
}

// Tabulated CDF of an unnormalized density on [lo, hi].
struct GridCdf {
  double lo, hi, step;
  std::vector<double> F;

  double operator()(double x) const {
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    const double pos = (x - lo) / step;
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return F[i] + frac * (F[i + 1] - F[i]);
  }
};

inline GridCdf cdf_from_density(const std::function<double(double)>& dens,
                                double lo, double hi, long n) {
  GridCdf cdf{lo, hi, (hi - lo) / static_cast<double>(n), {}};
  cdf.F.resize(static_cast<std::size_t>(n) + 1);
  cdf.F[0] = 0.0;
  double prev = dens(lo);
  for (long i = 1; i <= n; ++i) {
    const double cur = dens(lo + cdf.step * static_cast<double>(i));
    cdf.F[static_cast<std::size_t>(i)] =
        cdf.F[static_cast<std::size_t>(i - 1)] + 0.5 * (prev + cur) * cdf.step;
    prev = cur;
  }
  const double total = cdf.F.back();
  for (auto& v : cdf.F) v /= total;
  return cdf;
}

inline double ks_distance(std::vector<double> samples,
                          const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double F = cdf(samples[i]);
    d = std::max(d, std::abs(F - static_cast<double>(i + 1) / n));
    d = std::max(d, std::abs(F - static_cast<double>(i) / n));
  }
  return d;
}

// Independent deviate source for Monte Carlo oracles.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double normal() { return normal_(gen_); }
  double uniform() { return uniform_(gen_); }
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen_);
  }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// Plain rejection from the untruncated normal; usable only where the
// retained mass is non-negligible.
inline double naive_tn(double mu, bool omega, Rng& rng) {
  while (true) {
    const double z = mu + rng.normal();
    if (omega ? z > 0.0 : z <= 0.0) return z;
  }
}

inline Eigen::MatrixXd random_matrix(Eigen::Index n, Eigen::Index p,
                                     Rng& rng, double scale = 1.0) {
  Eigen::MatrixXd M(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) M(i, j) = scale * rng.normal();
  }
  return M;
}

inline Eigen::MatrixXd random_spd(Eigen::Index p, Rng& rng) {
  const Eigen::MatrixXd A = random_matrix(p + 2, p, rng);
  return A.transpose() * A +
         0.5 * Eigen::MatrixXd::Identity(p, p);
}

inline Eigen::VectorXi random_response(Eigen::Index n, Rng& rng) {
  Eigen::VectorXi y(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = rng.uniform() < 0.5 ? 1 : 0;
  return y;
}

struct RandomProblem {
  probitda::ProbitData data;
  probitda::PriorSpec prior;
};

inline RandomProblem random_proper_problem(Rng& rng, Eigen::Index max_n,
                                           Eigen::Index max_p) {
  const Eigen::Index n = 1 + rng.uniform_int(0, static_cast<int>(max_n) - 1);
  const Eigen::Index p = 1 + rng.uniform_int(0, static_cast<int>(max_p) - 1);
  probitda::ProbitData data{random_matrix(n, p, rng),
                            random_response(n, rng)};
  Eigen::VectorXd v(p);
  for (Eigen::Index j = 0; j < p; ++j) v[j] = rng.normal();
  return {std::move(data), probitda::ProperNormal{random_spd(p, rng), v}};
}

}  // namespace oracle
