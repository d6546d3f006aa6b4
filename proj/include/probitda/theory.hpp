#pragma once

#include <Eigen/Dense>
#include <optional>

#include "probitda/model.hpp"

namespace probitda {

/// Geometric-drift constants for the data-augmentation chain.
struct DriftReport {
  double lambda_max;  // largest eigenvalue of Wt (Wt^T Wt + I)^{-1} Wt^T
  double Lambda;      // sup_{u <= 0} |u phi(u) / (1 - Phi(u))|
  double c0;          // 0.5 sqrt(1/lambda_max - 1)
  double c_used;      // c0 unless the caller supplied c
  double rho;         // (1 + c^2) lambda_max, < 1 at c = c0
  double A1;          // p + (1 + 1/c^2) ||P^{-1/2} v||^2
  double A2;          // n lambda_max (1 + Lambda)
  double L;           // A1 + (1 + c^2) A2
};

enum class TraceVerdict { TraceClass, Unknown };

/// Result of the sufficient-condition trace-class test. The conditions are
/// sufficient only, so failing both yields Unknown, never a negative.
struct TraceClassVerdict {
  bool rank_ok;
  bool condition_A;
  Eigen::VectorXd condition_A_eigenvalues;
  bool condition_B;
  TraceVerdict verdict;
};

/// Posterior propriety under the improper flat prior.
struct ProprietyVerdict {
  bool rank_ok;
  std::optional<Eigen::VectorXd> positive_null_vector;
  bool proper;
};

/// Eigenvalues of B (B^T B + tau I)^{-1} B^T via singular values of B:
/// d_i^2 / (tau + d_i^2) padded with zeros to length n. All values lie in
/// [0,1) with at least one strictly positive.
Eigen::VectorXd shrinkage_eigenvalues(const Eigen::MatrixXd& B, double tau);

/// Largest eigenvalue of Wt (Wt^T Wt + I_p)^{-1} Wt^T, Wt = W Q^{-1/2};
/// lies in (0,1) for nonzero X. Defined only for proper regimes.
double compute_lambda_max(const PosteriorContext& ctx);

/// The supremum sup_{t >= 0} t phi(t) / Phi(t), located by a bracketing
/// grid plus golden-section refinement (absolute tolerance 1e-8).
double compute_Lambda();

/// All drift constants; c defaults to c0 = 0.5 sqrt(1/lambda_max - 1).
DriftReport drift_constants(const PosteriorContext& ctx,
                            std::optional<double> c = std::nullopt);

/// Closed-form conditional expectation E[nu(beta_{m+1}) | beta_m = beta'] of
/// the drift function nu(beta) = beta^T (X^T X + Q) beta under one
/// transition of the data-augmentation kernel.
double exact_expected_drift(const Eigen::VectorXd& beta_prime,
                            const PosteriorContext& ctx);

/// Sufficient-condition trace-class test: (A) all nonzero eigenvalues of
/// Q^{-1/2} X^T X Q^{-1/2} below 7/2, or (B) X Q^{-1/2} rectangular
/// diagonal (off-diagonal magnitudes below 1e-12).
TraceClassVerdict trace_class_check(const ProbitData& data,
                                    const PriorSpec& prior);

/// Posterior propriety under the flat prior: full column rank plus a
/// strictly positive a with W^T a = 0, found as an LP feasibility problem
/// normalized to a >= 1. Returns the witness when feasible.
ProprietyVerdict chen_shao_check(const ProbitData& data);

}  // namespace probitda
