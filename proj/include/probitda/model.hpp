#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <variant>

namespace probitda {

/// Binary-response regression problem: n x p design matrix X and
/// responses y with entries in {0,1}.
struct ProbitData {
  Eigen::MatrixXd X;
  Eigen::VectorXi y;

  ProbitData(Eigen::MatrixXd X_, Eigen::VectorXi y_);

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
};

/// Normal prior N_p(Q^{-1} v, Q^{-1}) with Q positive definite.
struct ProperNormal {
  Eigen::MatrixXd Q;
  Eigen::VectorXd v;
};

/// Zellner g-prior: Q = (1/g) X^T X, zero prior mean.
struct GPrior {
  double g = 1.0;
};

/// Improper flat prior, the limit Q -> 0, v = 0.
struct ImproperFlat {};

using PriorSpec = std::variant<ProperNormal, GPrior, ImproperFlat>;

/// Short regime tag ("proper_normal" | "gprior" | "improper_flat").
std::string prior_name(const PriorSpec& prior);

/// Precomputed quantities shared by the samplers and the theory engine.
/// Immutable after construction; safe to share across concurrent chains.
struct PosteriorContext {
  ProbitData data;

  Eigen::MatrixXd Q;  // resolved prior precision (zero matrix when flat)
  Eigen::VectorXd v;  // resolved prior linear term
  bool proper;        // false only for the improper flat regime
  std::string regime;  // prior_name() of the originating regime

  Eigen::MatrixXd P;        // X^T X + Q
  Eigen::MatrixXd Lchol;    // lower Cholesky factor of P
  Eigen::MatrixXd Pinv_Xt;  // P^{-1} X^T
  Eigen::VectorXd Pinv_v;   // P^{-1} v
  Eigen::MatrixXd Aquad;    // I_n - X P^{-1} X^T
  Eigen::VectorXd Bvec;     // X P^{-1} v
  Eigen::MatrixXd W;        // sign-flipped design
  std::optional<Eigen::MatrixXd> Wtilde;  // W Q^{-1/2}, proper regimes only

  Eigen::Index n() const { return data.n(); }
  Eigen::Index p() const { return data.p(); }

  /// P^{-1} b via the stored Cholesky factor.
  Eigen::VectorXd solve_P(const Eigen::VectorXd& b) const;

  /// Quadratic form b^T P^{-1} b, evaluated as a squared triangular solve.
  double quad_Pinv(const Eigen::VectorXd& b) const;
};

/// Row i of W is x_i^T when y_i = 0 and -x_i^T when y_i = 1; W^T W = X^T X.
Eigen::MatrixXd sign_transform(const Eigen::MatrixXd& X,
                               const Eigen::VectorXi& y);

/// Resolves the prior regime to concrete (Q, v) and validates it against
/// the data (rank requirements, positive definiteness).
struct ResolvedPrior {
  Eigen::MatrixXd Q;
  Eigen::VectorXd v;
  bool proper;
};
ResolvedPrior resolve_prior(const ProbitData& data, const PriorSpec& prior);

/// Builds the full precomputed context for a (data, prior) pair.
PosteriorContext build_context(const ProbitData& data, const PriorSpec& prior);

/// Symmetric positive-definite inverse square root via eigendecomposition.
Eigen::MatrixXd symmetric_inv_sqrt(const Eigen::MatrixXd& Q);

/// Numerical rank with threshold 1e-10 * (largest singular value).
Eigen::Index numeric_rank(const Eigen::MatrixXd& M);

}  // namespace probitda
