#include "probitda/model.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "probitda/errors.hpp"

namespace probitda {

namespace {

void require_symmetric(const Eigen::MatrixXd& Q, const char* what) {
  const double scale = std::max(1.0, Q.cwiseAbs().maxCoeff());
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error(Errc::cholesky_failure,
                std::string(what) + " is not symmetric");
  }
}

}  // namespace

ProbitData::ProbitData(Eigen::MatrixXd X_, Eigen::VectorXi y_)
    : X(std::move(X_)), y(std::move(y_)) {
  if (X.rows() != y.size()) {
    throw Error(Errc::dimension_mismatch,
                "X has " + std::to_string(X.rows()) + " rows but y has " +
                    std::to_string(y.size()) + " entries");
  }
  if (X.cols() < 1) {
    throw Error(Errc::dimension_mismatch, "X must have at least one column");
  }
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] != 0 && y[i] != 1) {
      throw Error(Errc::invalid_response,
                  "y[" + std::to_string(i) + "] = " + std::to_string(y[i]) +
                      " is not in {0,1}");
    }
  }
  if (!X.allFinite()) {
    throw Error(Errc::parse_error, "X contains non-finite entries");
  }
}

std::string prior_name(const PriorSpec& prior) {
  if (std::holds_alternative<ProperNormal>(prior)) return "proper_normal";
  if (std::holds_alternative<GPrior>(prior)) return "gprior";
  return "improper_flat";
}

Eigen::MatrixXd sign_transform(const Eigen::MatrixXd& X,
                               const Eigen::VectorXi& y) {
  if (X.rows() != y.size()) {
    throw Error(Errc::dimension_mismatch, "sign_transform: X rows != y size");
  }
  Eigen::MatrixXd W = X;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] == 1) W.row(i) = -W.row(i);
  }
  return W;
}

Eigen::Index numeric_rank(const Eigen::MatrixXd& M) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] <= 0.0) return 0;
  const double tol = 1e-10 * sv[0];
  Eigen::Index r = 0;
  while (r < sv.size() && sv[r] > tol) ++r;
  return r;
}

Eigen::MatrixXd symmetric_inv_sqrt(const Eigen::MatrixXd& Q) {
  require_symmetric(Q, "Q");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
  if (es.info() != Eigen::Success) {
    throw Error(Errc::cholesky_failure, "eigendecomposition of Q failed");
  }
  const Eigen::VectorXd& ev = es.eigenvalues();
  if (ev.minCoeff() <= 0.0) {
    throw Error(Errc::cholesky_failure, "Q is not positive definite");
  }
  const Eigen::VectorXd inv_sqrt = ev.array().rsqrt();
  return es.eigenvectors() * inv_sqrt.asDiagonal() *
         es.eigenvectors().transpose();
}

ResolvedPrior resolve_prior(const ProbitData& data, const PriorSpec& prior) {
  const Eigen::Index p = data.p();
  if (const auto* pn = std::get_if<ProperNormal>(&prior)) {
    if (pn->Q.rows() != p || pn->Q.cols() != p) {
      throw Error(Errc::dimension_mismatch, "Q must be p x p");
    }
    if (pn->v.size() != p) {
      throw Error(Errc::dimension_mismatch, "v must have length p");
    }
    require_symmetric(pn->Q, "Q");
    Eigen::LLT<Eigen::MatrixXd> llt(pn->Q);
    if (llt.info() != Eigen::Success) {
      throw Error(Errc::cholesky_failure, "Q is not positive definite");
    }
    return {pn->Q, pn->v, true};
  }
  if (const auto* gp = std::get_if<GPrior>(&prior)) {
    if (!(gp->g > 0.0)) {
      throw Error(Errc::invalid_config, "g-prior scale g must be positive");
    }
    if (data.n() < p || numeric_rank(data.X) < p) {
      throw Error(Errc::rank_deficient,
                  "g-prior requires n >= p and full column rank X");
    }
    Eigen::MatrixXd Q = (data.X.transpose() * data.X) / gp->g;
    return {std::move(Q), Eigen::VectorXd::Zero(p), true};
  }
  // improper flat: Q = 0, v = 0; propriety machinery needs full column rank
  if (data.n() < p || numeric_rank(data.X) < p) {
    throw Error(Errc::rank_deficient,
                "flat prior requires n >= p and full column rank X");
  }
  return {Eigen::MatrixXd::Zero(p, p), Eigen::VectorXd::Zero(p), false};
}

PosteriorContext build_context(const ProbitData& data,
                               const PriorSpec& prior) {
  ResolvedPrior rp = resolve_prior(data, prior);
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();

  Eigen::MatrixXd P = data.X.transpose() * data.X + rp.Q;
  P = 0.5 * (P + P.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(P);
  if (llt.info() != Eigen::Success) {
    throw Error(Errc::cholesky_failure, "X^T X + Q is not positive definite");
  }

  PosteriorContext ctx{data,
                       std::move(rp.Q),
                       std::move(rp.v),
                       rp.proper,
                       prior_name(prior),
                       std::move(P),
                       llt.matrixL(),
                       {},
                       {},
                       {},
                       {},
                       sign_transform(data.X, data.y),
                       std::nullopt};

  ctx.Pinv_Xt = llt.solve(data.X.transpose());
  ctx.Pinv_v = llt.solve(ctx.v);
  ctx.Aquad = Eigen::MatrixXd::Identity(n, n) - data.X * ctx.Pinv_Xt;
  ctx.Aquad = 0.5 * (ctx.Aquad + ctx.Aquad.transpose()).eval();
  ctx.Bvec = data.X * ctx.Pinv_v;
  if (ctx.proper) {
    ctx.Wtilde = ctx.W * symmetric_inv_sqrt(ctx.Q);
  }
  return ctx;
}

Eigen::VectorXd PosteriorContext::solve_P(const Eigen::VectorXd& b) const {
  Eigen::VectorXd x = Lchol.triangularView<Eigen::Lower>().solve(b);
  return Lchol.transpose().triangularView<Eigen::Upper>().solve(x);
}

double PosteriorContext::quad_Pinv(const Eigen::VectorXd& b) const {
  return Lchol.triangularView<Eigen::Lower>().solve(b).squaredNorm();
}

}  // namespace probitda
