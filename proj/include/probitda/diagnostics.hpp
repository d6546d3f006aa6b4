#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "probitda/model.hpp"
#include "probitda/samplers.hpp"

namespace probitda {

/// Sample autocorrelations r_0..r_max_lag with the biased (divide-by-m)
/// covariance normalization, so the sequence is nonnegative definite and
/// r_0 = 1 exactly.
Eigen::VectorXd autocorrelation(const Eigen::VectorXd& series, int max_lag);

/// Prefix means: out[k] = mean(series[0..k]).
Eigen::VectorXd running_mean(const Eigen::VectorXd& series);

struct BatchMeansEstimate {
  double sigma2_hat;  // batch-means estimate of the CLT variance
  double ess;         // m * var(series) / sigma2_hat
};

/// Nonoverlapping batch means with floor(sqrt(m)) batches of equal size
/// (trailing remainder dropped). Requires length >= 100.
BatchMeansEstimate batch_means(const Eigen::VectorXd& series);

struct PosteriorMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd second_moment;  // E[beta beta^T]
};

/// Deterministic quadrature of the (unnormalized) posterior for p <= 2:
/// adaptive Simpson grids refined until the normalizing constant is
/// stable to 1e-6 relative.
PosteriorMoments quadrature_posterior_moments(const ProbitData& data,
                                              const PriorSpec& prior);

/// Per-chain summary: one entry per coordinate throughout.
struct DiagnosticsReport {
  std::vector<Eigen::VectorXd> acf;            // lags 0..L
  std::vector<Eigen::VectorXd> running_means;  // at the checkpoints below
  std::vector<long> checkpoints;               // 1-based iteration indices
  Eigen::VectorXd sigma2_hat;                  // NaN when the chain is short
  Eigen::VectorXd ess;
  Eigen::VectorXd mean;
  Eigen::VectorXd sd;
};

/// Builds the per-chain report; running means are checkpointed every
/// max(1, m/2000) iterations to bound output size.
DiagnosticsReport diagnose(const SampleMatrix& run, int max_lag = 50);

struct ComparisonReport {
  std::vector<std::string> labels;
  std::vector<DiagnosticsReport> chains;
  Eigen::MatrixXd lag1_acf;  // chains x p
  std::vector<std::vector<std::string>> lag1_order;  // per coordinate,
                                                     // ascending lag-1 ACF
  std::vector<std::string> notes;
};

/// Side-by-side diagnostics for labeled runs sharing the same dimension.
ComparisonReport compare_chains(
    const std::vector<std::pair<std::string, SampleMatrix>>& runs,
    int max_lag = 50);

}  // namespace probitda
