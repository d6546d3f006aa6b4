#include "probitda/theory.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <vector>

#include "probitda/errors.hpp"
#include "probitda/normal.hpp"

namespace probitda {

namespace {

// Phase-one simplex (Bland's rule) for {s >= 0 : A s = b}. Returns the
// feasible point when one exists. A is small and dense here.
std::optional<Eigen::VectorXd> solve_equality_feasibility(
    Eigen::MatrixXd A, Eigen::VectorXd b) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();

  for (Eigen::Index i = 0; i < m; ++i) {
    if (b[i] < 0.0) {
      A.row(i) = -A.row(i);
      b[i] = -b[i];
    }
  }
  const double scale =
      std::max({1.0, A.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
  const double tol = 1e-11 * scale;

  // tableau [A | I | b] with artificial basis; minimize the artificial sum
  Eigen::MatrixXd T(m, n + m + 1);
  T.leftCols(n) = A;
  T.middleCols(n, m) = Eigen::MatrixXd::Identity(m, m);
  T.col(n + m) = b;
  Eigen::VectorXd red = Eigen::VectorXd::Zero(n + m);
  red.head(n) = -A.colwise().sum();
  std::vector<Eigen::Index> basis(m);
  for (Eigen::Index i = 0; i < m; ++i) basis[i] = n + i;

  // Bland's rule terminates in exact arithmetic; the cap only guards
  // against tolerance-induced stalls (treated as "no certificate").
  const long max_pivots = 10000 * static_cast<long>(n + m);
  for (long pivot = 0; pivot < max_pivots; ++pivot) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < n + m; ++j) {
      if (red[j] < -tol) {
        enter = j;
        break;  // Bland: smallest index
      }
    }
    if (enter < 0) break;

    Eigen::Index leave = -1;
    double best_ratio = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (T(i, enter) > tol) {
        const double ratio = T(i, n + m) / T(i, enter);
        if (leave < 0 || ratio < best_ratio - tol ||
            (ratio < best_ratio + tol && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) return std::nullopt;  // unbounded; cannot happen here

    T.row(leave) /= T(leave, enter);
    for (Eigen::Index i = 0; i < m; ++i) {
      if (i != leave && T(i, enter) != 0.0) {
        T.row(i) -= T(i, enter) * T.row(leave);
      }
    }
    red -= red[enter] * T.row(leave).head(n + m);
    basis[leave] = enter;
  }

  double artificial_sum = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (basis[i] >= n) artificial_sum += T(i, n + m);
  }
  if (artificial_sum > 1e-7 * scale) return std::nullopt;

  // Re-solve on the structural basis from the original data so the
  // returned point satisfies A s = b to machine precision.
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (basis[i] < n) cols.push_back(basis[i]);
  }
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
  if (!cols.empty()) {
    Eigen::MatrixXd Ab(m, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) Ab.col(j) = A.col(cols[j]);
    Eigen::VectorXd sb = Ab.colPivHouseholderQr().solve(b);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      s[cols[j]] = std::max(0.0, sb[j]);
    }
  }
  if ((A * s - b).cwiseAbs().maxCoeff() > 1e-8 * scale) return std::nullopt;
  return s;
}

Eigen::VectorXd squared_singular_values(const Eigen::MatrixXd& M) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  return svd.singularValues().array().square();
}

}  // namespace

Eigen::VectorXd shrinkage_eigenvalues(const Eigen::MatrixXd& B, double tau) {
  if (!(tau > 0.0)) {
    throw Error(Errc::invalid_tau, "tau must be positive");
  }
  if (B.size() == 0 || B.cwiseAbs().maxCoeff() == 0.0) {
    throw Error(Errc::zero_matrix, "B must be a nonzero matrix");
  }
  const Eigen::Index n = B.rows();
  Eigen::VectorXd d2 = squared_singular_values(B);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < d2.size() && i < n; ++i) {
    out[i] = d2[i] / (tau + d2[i]);
  }
  return out;
}

double compute_lambda_max(const PosteriorContext& ctx) {
  if (!ctx.proper || !ctx.Wtilde) {
    throw Error(Errc::improper_prior_unsupported,
                "lambda_max is defined only via Q^{-1/2}");
  }
  if (ctx.data.X.cwiseAbs().maxCoeff() == 0.0) {
    throw Error(Errc::zero_matrix,
                "X = 0: drift constants degenerate to the prior-only case");
  }
  const Eigen::VectorXd d2 = squared_singular_values(*ctx.Wtilde);
  const double m = d2.maxCoeff();
  return m / (1.0 + m);
}

double compute_Lambda() {
  const auto f = [](double t) {
    return t * norm_pdf(t) / norm_cdf(t);
  };
  // coarse bracket over [0, 10], then golden-section refinement
  const double step = 0.01;
  double best_t = 0.0, best_f = 0.0;
  for (int k = 0; k <= 1000; ++k) {
    const double t = k * step;
    const double v = f(t);
    if (v > best_f) {
      best_f = v;
      best_t = t;
    }
  }
  double lo = std::max(0.0, best_t - step);
  double hi = best_t + step;
  const double gr = 0.6180339887498949;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-10) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = f(x1);
    }
  }
  return f(0.5 * (lo + hi));
}

DriftReport drift_constants(const PosteriorContext& ctx,
                            std::optional<double> c) {
  if (c && !(*c > 0.0)) {
    throw Error(Errc::invalid_config, "drift constant c must be positive");
  }
  const double lambda = compute_lambda_max(ctx);
  const double Lambda = compute_Lambda();
  const double c0 = 0.5 * std::sqrt(1.0 / lambda - 1.0);
  const double cu = c ? *c : c0;
  const double c2 = cu * cu;
  const double vterm = ctx.quad_Pinv(ctx.v);
  const double A1 = static_cast<double>(ctx.p()) + (1.0 + 1.0 / c2) * vterm;
  const double A2 =
      static_cast<double>(ctx.n()) * lambda * (1.0 + Lambda);
  return {lambda,
          Lambda,
          c0,
          cu,
          (1.0 + c2) * lambda,
          A1,
          A2,
          A1 + (1.0 + c2) * A2};
}

double exact_expected_drift(const Eigen::VectorXd& beta_prime,
                            const PosteriorContext& ctx) {
  if (beta_prime.size() != ctx.p()) {
    throw Error(Errc::dimension_mismatch, "beta' must have length p");
  }
  const Eigen::VectorXd xi = ctx.data.X * beta_prime;
  Eigen::VectorXd mu(ctx.n());
  double trace_term = 0.0;
  for (Eigen::Index i = 0; i < ctx.n(); ++i) {
    const TruncMoments m = truncated_normal_moments(xi[i], ctx.data.y[i] == 1);
    mu[i] = m.mean;
    trace_term += m.var * (1.0 - ctx.Aquad(i, i));  // (X P^{-1} X^T)_{ii}
  }
  const Eigen::VectorXd w = ctx.data.X.transpose() * mu + ctx.v;
  return static_cast<double>(ctx.p()) + ctx.quad_Pinv(w) + trace_term;
}

TraceClassVerdict trace_class_check(const ProbitData& data,
                                    const PriorSpec& prior) {
  if (std::holds_alternative<ImproperFlat>(prior)) {
    throw Error(Errc::improper_prior_unsupported,
                "trace-class conditions require a proper prior");
  }
  TraceClassVerdict out{false, false, {}, false, TraceVerdict::Unknown};
  out.rank_ok =
      numeric_rank(data.X) == std::min(data.n(), data.p());
  if (!out.rank_ok) return out;

  const ResolvedPrior rp = resolve_prior(data, prior);
  const Eigen::MatrixXd Xtilde = data.X * symmetric_inv_sqrt(rp.Q);

  out.condition_A_eigenvalues = squared_singular_values(Xtilde);
  // strictness guard: eigensolver rounding must not flip the 7/2 boundary
  out.condition_A =
      (out.condition_A_eigenvalues.array() < 3.5 - 1e-9).all();

  double max_offdiag = 0.0;
  for (Eigen::Index i = 0; i < Xtilde.rows(); ++i) {
    for (Eigen::Index j = 0; j < Xtilde.cols(); ++j) {
      if (i != j) max_offdiag = std::max(max_offdiag, std::abs(Xtilde(i, j)));
    }
  }
  out.condition_B = max_offdiag <= 1e-12;

  out.verdict = (out.condition_A || out.condition_B)
                    ? TraceVerdict::TraceClass
                    : TraceVerdict::Unknown;
  return out;
}

ProprietyVerdict chen_shao_check(const ProbitData& data) {
  ProprietyVerdict out{false, std::nullopt, false};
  out.rank_ok = data.n() >= data.p() && numeric_rank(data.X) == data.p();

  // a >= 1 with W^T a = 0  <=>  s >= 0 with W^T s = -W^T 1, a = 1 + s
  const Eigen::MatrixXd W = sign_transform(data.X, data.y);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(data.n());
  const auto s = solve_equality_feasibility(W.transpose(),
                                            -(W.transpose() * ones));
  if (s) {
    out.positive_null_vector = ones + *s;
  }
  out.proper = out.rank_ok && s.has_value();
  return out;
}

}  // namespace probitda
