#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "probitda/model.hpp"
#include "probitda/rng.hpp"

namespace probitda {

enum class Algorithm { ACDA, HaarPXDA };

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct SamplerConfig {
  Algorithm algorithm = Algorithm::ACDA;
  long iterations = 1;
  long burnin = 0;
  long thin = 1;
  std::uint64_t seed = 0;
  double epsilon = 0.5;  // rejection-envelope parameter in (0,1)

  void validate() const;
};

/// Current position of one chain; last_z keeps the latents of the most
/// recent transition for inspection.
struct ChainState {
  Eigen::VectorXd beta;
  std::optional<Eigen::VectorXd> last_z;
};

/// Rejection-step counters for the scaling move.
struct GStepStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepts = 0;

  double acceptance_rate() const {
    return proposals == 0 ? 1.0
                          : static_cast<double>(accepts) /
                                static_cast<double>(proposals);
  }
};

struct RunMeta {
  std::string algorithm;
  std::string regime;
  std::uint64_t seed = 0;
  long iterations = 0;
  long burnin = 0;
  long thin = 0;
  double wall_seconds = 0.0;
  GStepStats gstep;
};

/// Stored draws: row k is the k-th retained beta.
struct SampleMatrix {
  Eigen::MatrixXd draws;
  RunMeta meta;
};

/// One draw from TN(mu, 1, omega): positive part when omega = 1,
/// nonpositive part when omega = 0.
double sample_tn(double mu, bool omega, Rng& rng);

/// beta | z, y  ~  N_p(P^{-1}(v + X^T z), P^{-1}).
Eigen::VectorXd sample_beta_given_z(const Eigen::VectorXd& z,
                                    const PosteriorContext& ctx, Rng& rng);

/// z | beta, y: independent TN(x_i^T beta, 1, y_i) coordinates.
Eigen::VectorXd sample_z_given_beta(const Eigen::VectorXd& beta,
                                    const PosteriorContext& ctx, Rng& rng);

/// One data-augmentation transition: z-draw then beta-draw.
ChainState acda_step(const ChainState& state, const PosteriorContext& ctx,
                     Rng& rng);

/// A(z) = z^T (I - X P^{-1} X^T) z (> 0 for nonzero z) and
/// B(z) = z^T X P^{-1} v.
std::pair<double, double> compute_AB(const Eigen::VectorXd& z,
                                     const PosteriorContext& ctx);

/// Log acceptance probability of the scaling-move rejection sampler at
/// proposal point u = g^2; always <= 0 up to rounding.
double g_log_acceptance(double u, double A, double B, long n, double epsilon);

/// One draw from the density proportional to
/// g^{n-1} exp(-(A g^2 - 2 B g)/2) on (0, inf). B = 0 reduces to the
/// square root of a Gamma(n/2, 2/A) draw; otherwise rejection sampling
/// with a Gamma(n/2, 2/((1-eps) A)) proposal.
double sample_g(double A, double B, long n, double epsilon, Rng& rng,
                GStepStats* stats = nullptr);

/// One sandwich transition: z-draw, scaling move z' = g z, beta-draw.
ChainState haar_pxda_step(const ChainState& state, const PosteriorContext& ctx,
                          const SamplerConfig& cfg, Rng& rng,
                          GStepStats* stats = nullptr);

/// Runs the configured kernel, discards burn-in, keeps every thin-th
/// draw. Fully deterministic given the seed.
SampleMatrix run_chain(const PosteriorContext& ctx, const SamplerConfig& cfg,
                       const Eigen::VectorXd& init_beta);

}  // namespace probitda
