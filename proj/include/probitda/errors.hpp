#pragma once

#include <stdexcept>
#include <string>

namespace probitda {

/// Error kinds surfaced by the library. Grouped into three exit-code
/// categories: validation (2), numeric (3), I/O (4).
enum class Errc {
  // validation
  dimension_mismatch,
  invalid_tau,
  invalid_epsilon,
  invalid_config,
  constant_series,
  too_short,
  dimension_too_large,
  parse_error,
  invalid_response,
  empty_file,
  rank_deficient,
  zero_matrix,
  improper_prior_unsupported,
  // numeric
  cholesky_failure,
  nonpositive_a,
  zero_latent,
  rejection_limit,
  improper_posterior,
  // I/O
  io_failure,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

  /// Process exit code for the CLI: 2 validation, 3 numeric, 4 I/O.
  int exit_code() const noexcept {
    switch (code_) {
      case Errc::cholesky_failure:
      case Errc::nonpositive_a:
      case Errc::zero_latent:
      case Errc::rejection_limit:
      case Errc::improper_posterior:
        return 3;
      case Errc::io_failure:
        return 4;
      default:
        return 2;
    }
  }

  const char* code_name() const noexcept {
    switch (code_) {
      case Errc::dimension_mismatch: return "DimensionMismatch";
      case Errc::invalid_tau: return "InvalidTau";
      case Errc::invalid_epsilon: return "InvalidEpsilon";
      case Errc::invalid_config: return "InvalidConfig";
      case Errc::constant_series: return "ConstantSeries";
      case Errc::too_short: return "TooShort";
      case Errc::dimension_too_large: return "DimensionTooLarge";
      case Errc::parse_error: return "ParseError";
      case Errc::invalid_response: return "InvalidResponse";
      case Errc::empty_file: return "EmptyFile";
      case Errc::rank_deficient: return "RankDeficient";
      case Errc::zero_matrix: return "ZeroMatrix";
      case Errc::improper_prior_unsupported: return "ImproperPriorUnsupported";
      case Errc::cholesky_failure: return "CholeskyFailure";
      case Errc::nonpositive_a: return "NonpositiveA";
      case Errc::zero_latent: return "ZeroLatent";
      case Errc::rejection_limit: return "RejectionLimit";
      case Errc::improper_posterior: return "ImproperPosterior";
      case Errc::io_failure: return "IoFailure";
    }
    return "Unknown";
  }

 private:
  Errc code_;
};

}  // namespace probitda
