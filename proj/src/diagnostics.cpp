#include "probitda/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "probitda/errors.hpp"
#include "probitda/normal.hpp"
#include "probitda/theory.hpp"

namespace probitda {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sample_variance(const Eigen::VectorXd& x) {
  const double mean = x.mean();
  return (x.array() - mean).square().sum() /
         static_cast<double>(x.size() - 1);
}

// Log unnormalized posterior density of beta.
struct LogPosterior {
  const ProbitData& data;
  Eigen::MatrixXd Q;
  Eigen::VectorXd prior_mean;
  bool proper;

  double operator()(const Eigen::VectorXd& beta) const {
    double lp = 0.0;
    if (proper) {
      const Eigen::VectorXd d = beta - prior_mean;
      lp -= 0.5 * d.dot(Q * d);
    }
    const Eigen::VectorXd t = data.X * beta;
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      lp += data.y[i] == 1 ? log_norm_cdf(t[i]) : log_norm_cdf(-t[i]);
    }
    return lp;
  }
};

// Newton ascent on the probit log likelihood (concave), used to centre
// the quadrature box under the flat prior.
Eigen::VectorXd probit_mode(const ProbitData& data, Eigen::MatrixXd* neg_hess) {
  const Eigen::Index p = data.p();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  const LogPosterior lp{data, {}, {}, false};
  double cur = lp(beta);
  for (int iter = 0; iter < 100; ++iter) {
    const Eigen::VectorXd t = data.X * beta;
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(p);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index i = 0; i < data.n(); ++i) {
      const double ti = t[i];
      double g, w;
      if (data.y[i] == 1) {
        const double im = inverse_mills(ti);
        g = im;
        w = im * (ti + im);
      } else {
        const double h = normal_hazard(ti);
        g = -h;
        w = h * (h - ti);
      }
      grad += g * data.X.row(i).transpose();
      H += w * (data.X.row(i).transpose() * data.X.row(i));
    }
    Eigen::VectorXd step = H.ldlt().solve(grad);
    double scale = 1.0;
    Eigen::VectorXd cand = beta + step;
    double cand_lp = lp(cand);
    for (int half = 0; half < 30 && !(cand_lp >= cur); ++half) {
      scale *= 0.5;
      cand = beta + scale * step;
      cand_lp = lp(cand);
    }
    if (neg_hess) *neg_hess = H;
    if ((cand - beta).norm() <= 1e-12 * (1.0 + beta.norm())) {
      return cand;
    }
    beta = cand;
    cur = cand_lp;
  }
  return beta;
}

struct Box {
  Eigen::VectorXd lo, hi, centre;
};

// Grow a side while the density at its midpoint still carries mass
// relative to the centre. The posterior is log-concave, so edge and
// corner probes are enough.
void expand_box(Box& box, const LogPosterior& lp) {
  const double cutoff = lp(box.centre) + std::log(1e-14);
  for (Eigen::Index d = 0; d < box.lo.size(); ++d) {
    for (int round = 0; round < 12; ++round) {
      Eigen::VectorXd probe = box.centre;
      probe[d] = box.lo[d];
      if (lp(probe) <= cutoff) break;
      box.lo[d] -= 0.5 * (box.hi[d] - box.lo[d]);
    }
    for (int round = 0; round < 12; ++round) {
      Eigen::VectorXd probe = box.centre;
      probe[d] = box.hi[d];
      if (lp(probe) <= cutoff) break;
      box.hi[d] += 0.5 * (box.hi[d] - box.lo[d]);
    }
  }
}

PosteriorMoments simpson_1d(const LogPosterior& lp, const Box& box) {
  double prev_logZ = kNaN;
  PosteriorMoments out;
  for (long N = 64; N <= (1L << 21); N *= 2) {
    const double h = (box.hi[0] - box.lo[0]) / static_cast<double>(N);
    std::vector<double> vals(N + 1);
    double shift = -std::numeric_limits<double>::infinity();
    for (long i = 0; i <= N; ++i) {
      Eigen::VectorXd b(1);
      b[0] = box.lo[0] + h * static_cast<double>(i);
      vals[i] = lp(b);
      shift = std::max(shift, vals[i]);
    }
    double Z = 0.0, m1 = 0.0, m2 = 0.0;
    for (long i = 0; i <= N; ++i) {
      const double w = (i == 0 || i == N) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      const double b = box.lo[0] + h * static_cast<double>(i);
      const double e = w * std::exp(vals[i] - shift);
      Z += e;
      m1 += e * b;
      m2 += e * b * b;
    }
    const double logZ = shift + std::log(Z * h / 3.0);
    out.mean = Eigen::VectorXd::Constant(1, m1 / Z);
    out.second_moment = Eigen::MatrixXd::Constant(1, 1, m2 / Z);
    if (std::isfinite(prev_logZ) &&
        std::abs(std::expm1(prev_logZ - logZ)) <= 1e-6) {
      return out;
    }
    prev_logZ = logZ;
  }
  throw std::runtime_error("1-D posterior quadrature did not converge");
}

PosteriorMoments simpson_2d(const LogPosterior& lp, const Box& box) {
  double prev_logZ = kNaN;
  PosteriorMoments out;
  for (long N = 32; N <= 4096; N *= 2) {
    const double h0 = (box.hi[0] - box.lo[0]) / static_cast<double>(N);
    const double h1 = (box.hi[1] - box.lo[1]) / static_cast<double>(N);
    Eigen::MatrixXd vals(N + 1, N + 1);
    double shift = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd b(2);
    for (long i = 0; i <= N; ++i) {
      b[0] = box.lo[0] + h0 * static_cast<double>(i);
      for (long j = 0; j <= N; ++j) {
        b[1] = box.lo[1] + h1 * static_cast<double>(j);
        vals(i, j) = lp(b);
        shift = std::max(shift, vals(i, j));
      }
    }
    double Z = 0.0;
    Eigen::Vector2d m1 = Eigen::Vector2d::Zero();
    Eigen::Matrix2d m2 = Eigen::Matrix2d::Zero();
    for (long i = 0; i <= N; ++i) {
      const double wi = (i == 0 || i == N) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      b[0] = box.lo[0] + h0 * static_cast<double>(i);
      for (long j = 0; j <= N; ++j) {
        const double wj =
            (j == 0 || j == N) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        b[1] = box.lo[1] + h1 * static_cast<double>(j);
        const double e = wi * wj * std::exp(vals(i, j) - shift);
        Z += e;
        m1 += e * b;
        m2 += e * (b * b.transpose());
      }
    }
    const double logZ = shift + std::log(Z * h0 * h1 / 9.0);
    out.mean = m1 / Z;
    out.second_moment = m2 / Z;
    if (std::isfinite(prev_logZ) &&
        std::abs(std::expm1(prev_logZ - logZ)) <= 1e-6) {
      return out;
    }
    prev_logZ = logZ;
  }
  throw std::runtime_error("2-D posterior quadrature did not converge");
}

}  // namespace

Eigen::VectorXd autocorrelation(const Eigen::VectorXd& series, int max_lag) {
  if (max_lag < 1) {
    throw Error(Errc::invalid_config, "max_lag must be positive");
  }
  const Eigen::Index m = series.size();
  if (m <= static_cast<Eigen::Index>(max_lag) + 1) {
    throw Error(Errc::too_short, "series must be longer than max_lag + 1");
  }
  const double mean = series.mean();
  const Eigen::VectorXd c = series.array() - mean;
  const double c0 = c.squaredNorm() / static_cast<double>(m);
  if (c0 <= 0.0) {
    throw Error(Errc::constant_series, "series is constant");
  }
  Eigen::VectorXd r(max_lag + 1);
  r[0] = 1.0;
  for (int k = 1; k <= max_lag; ++k) {
    const Eigen::Index len = m - k;
    r[k] = c.head(len).dot(c.tail(len)) / static_cast<double>(m) / c0;
  }
  return r;
}

Eigen::VectorXd running_mean(const Eigen::VectorXd& series) {
  if (series.size() == 0) {
    throw Error(Errc::too_short, "series is empty");
  }
  Eigen::VectorXd out(series.size());
  double mean = 0.0;
  for (Eigen::Index i = 0; i < series.size(); ++i) {
    mean += (series[i] - mean) / static_cast<double>(i + 1);
    out[i] = mean;
  }
  return out;
}

BatchMeansEstimate batch_means(const Eigen::VectorXd& series) {
  const Eigen::Index m = series.size();
  if (m < 100) {
    throw Error(Errc::too_short, "batch means needs at least 100 points");
  }
  const Eigen::Index b =
      static_cast<Eigen::Index>(std::floor(std::sqrt(static_cast<double>(m))));
  const Eigen::Index size = m / b;
  Eigen::VectorXd means(b);
  for (Eigen::Index k = 0; k < b; ++k) {
    means[k] = series.segment(k * size, size).mean();
  }
  const double sigma2 = static_cast<double>(size) * sample_variance(means);
  const double ess = static_cast<double>(m) * sample_variance(series) / sigma2;
  return {sigma2, ess};
}

PosteriorMoments quadrature_posterior_moments(const ProbitData& data,
                                              const PriorSpec& prior) {
  const Eigen::Index p = data.p();
  if (p > 2) {
    throw Error(Errc::dimension_too_large,
                "quadrature oracle supports p <= 2 only");
  }

  const bool flat = std::holds_alternative<ImproperFlat>(prior);
  if (flat && !chen_shao_check(data).proper) {
    throw Error(Errc::improper_posterior,
                "flat-prior posterior fails the propriety conditions");
  }

  Box box;
  LogPosterior lp{data, {}, {}, !flat};
  if (!flat) {
    const ResolvedPrior rp = resolve_prior(data, prior);
    const Eigen::MatrixXd Qinv =
        rp.Q.llt().solve(Eigen::MatrixXd::Identity(p, p));
    lp.Q = rp.Q;
    lp.prior_mean = Qinv * rp.v;
    if (data.n() == 0) {
      // empty product likelihood: posterior equals the prior
      return {lp.prior_mean,
              Qinv + lp.prior_mean * lp.prior_mean.transpose()};
    }
    const Eigen::VectorXd sd = Qinv.diagonal().array().sqrt();
    box = {lp.prior_mean - 10.0 * sd, lp.prior_mean + 10.0 * sd,
           lp.prior_mean};
  } else {
    Eigen::MatrixXd H;
    const Eigen::VectorXd mode = probit_mode(data, &H);
    const Eigen::MatrixXd cov =
        H.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
    const Eigen::VectorXd sd = cov.diagonal().array().sqrt();
    box = {mode - 10.0 * sd, mode + 10.0 * sd, mode};
  }
  expand_box(box, lp);
  return p == 1 ? simpson_1d(lp, box) : simpson_2d(lp, box);
}

DiagnosticsReport diagnose(const SampleMatrix& run, int max_lag) {
  const Eigen::Index m = run.draws.rows();
  const Eigen::Index p = run.draws.cols();
  if (m < 1) {
    throw Error(Errc::too_short, "no retained draws to diagnose");
  }
  DiagnosticsReport rep;
  rep.sigma2_hat = Eigen::VectorXd::Constant(p, kNaN);
  rep.ess = Eigen::VectorXd::Constant(p, kNaN);
  rep.mean.resize(p);
  rep.sd.resize(p);

  const long step = std::max<long>(1, m / 2000);
  for (long k = step; k <= m; k += step) rep.checkpoints.push_back(k);
  if (rep.checkpoints.back() != m) rep.checkpoints.push_back(m);

  for (Eigen::Index j = 0; j < p; ++j) {
    const Eigen::VectorXd series = run.draws.col(j);
    rep.mean[j] = series.mean();
    rep.sd[j] = m > 1 ? std::sqrt(sample_variance(series)) : kNaN;

    const int lags = static_cast<int>(std::min<Eigen::Index>(max_lag, m - 2));
    if (lags >= 1 && rep.sd[j] > 0.0) {
      rep.acf.push_back(autocorrelation(series, lags));
    } else {
      rep.acf.push_back(Eigen::VectorXd::Ones(1));
    }

    const Eigen::VectorXd full = running_mean(series);
    Eigen::VectorXd checked(static_cast<Eigen::Index>(rep.checkpoints.size()));
    for (std::size_t k = 0; k < rep.checkpoints.size(); ++k) {
      checked[static_cast<Eigen::Index>(k)] = full[rep.checkpoints[k] - 1];
    }
    rep.running_means.push_back(std::move(checked));

    if (m >= 100 && rep.sd[j] > 0.0) {
      const BatchMeansEstimate bm = batch_means(series);
      rep.sigma2_hat[j] = bm.sigma2_hat;
      rep.ess[j] = bm.ess;
    }
  }
  return rep;
}

ComparisonReport compare_chains(
    const std::vector<std::pair<std::string, SampleMatrix>>& runs,
    int max_lag) {
  if (runs.empty()) {
    throw Error(Errc::invalid_config, "no runs to compare");
  }
  const Eigen::Index p = runs.front().second.draws.cols();
  for (const auto& [label, run] : runs) {
    if (run.draws.cols() != p) {
      throw Error(Errc::dimension_mismatch,
                  "run '" + label + "' has mismatched dimension");
    }
  }

  ComparisonReport rep;
  rep.lag1_acf.resize(static_cast<Eigen::Index>(runs.size()), p);
  for (const auto& [label, run] : runs) {
    rep.labels.push_back(label);
    rep.chains.push_back(diagnose(run, max_lag));
    const auto& d = rep.chains.back();
    for (Eigen::Index j = 0; j < p; ++j) {
      rep.lag1_acf(static_cast<Eigen::Index>(rep.chains.size()) - 1, j) =
          d.acf[j].size() > 1 ? d.acf[j][1] : kNaN;
    }
  }

  for (Eigen::Index j = 0; j < p; ++j) {
    std::vector<std::size_t> idx(runs.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return rep.lag1_acf(static_cast<Eigen::Index>(a), j) <
             rep.lag1_acf(static_cast<Eigen::Index>(b), j);
    });
    std::vector<std::string> order;
    for (std::size_t i : idx) order.push_back(rep.labels[i]);
    rep.lag1_order.push_back(std::move(order));
  }

  rep.notes = {
      "sigma2_hat is the batch-means estimate of the CLT asymptotic "
      "variance; a sandwich chain is expected to show a value no larger "
      "than the plain DA chain targeting the same posterior.",
      "Operator-spectrum comparisons are reported only through this "
      "asymptotic-variance proxy, not through eigenvalue computations."};
  return rep;
}

}  // namespace probitda
