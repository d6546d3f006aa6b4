#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>

#include "probitda/model.hpp"

namespace probitda {

/// Parses a data CSV with header "y,x1,...,xp" (UTF-8, decimal point, no
/// missing values). With add_intercept a leading all-ones column is
/// prepended; the library never augments silently.
ProbitData load_csv(const std::filesystem::path& path,
                    bool add_intercept = false);

/// Headerless numeric CSV, one matrix row per line.
Eigen::MatrixXd load_matrix_csv(const std::filesystem::path& path);

/// Headerless numeric CSV with one value per line (or one row).
Eigen::VectorXd load_vector_csv(const std::filesystem::path& path);

/// Full-precision decimal rendering ("%.17g"), stable across runs.
std::string format_double(double x);

/// Writes via a temp file plus atomic rename so failures never leave a
/// partial file behind.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

/// Sample matrix with header beta_1..beta_p.
void write_samples_csv(const std::filesystem::path& path,
                       const Eigen::MatrixXd& draws);

Eigen::MatrixXd read_samples_csv(const std::filesystem::path& path);

/// Fixed-seed synthetic probit dataset shaped like a small two-covariate
/// case-control study (n rows, covariates correlated, strong effects).
/// Deterministic in (n, seed); covariate matrix excludes the intercept.
ProbitData synthetic_probit_data(long n = 55, std::uint64_t seed = 20170101);

/// Writes a synthetic dataset as a data CSV ("y,x1,x2" header).
void write_synthetic_csv(const std::filesystem::path& path, long n,
                         std::uint64_t seed);

}  // namespace probitda
