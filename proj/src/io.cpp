#include "probitda/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "probitda/errors.hpp"
#include "probitda/rng.hpp"

namespace probitda {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_number(const std::string& cell, long row, long col) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(cell, &pos);
    if (pos != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::parse_error, "row " + std::to_string(row) + ", column " +
                                       std::to_string(col) +
                                       ": cannot parse '" + cell + "'");
  }
}

std::vector<std::vector<double>> read_numeric_rows(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::io_failure, "cannot open " + path.string());
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    std::vector<double> row;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      row.push_back(parse_number(cells[c], lineno, static_cast<long>(c) + 1));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw Error(Errc::empty_file, path.string() + " holds no data");
  }
  for (const auto& r : rows) {
    if (r.size() != rows.front().size()) {
      throw Error(Errc::parse_error,
                  path.string() + ": ragged rows (expected " +
                      std::to_string(rows.front().size()) + " columns)");
    }
  }
  return rows;
}

}  // namespace

ProbitData load_csv(const std::filesystem::path& path, bool add_intercept) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::io_failure, "cannot open " + path.string());
  }
  std::string header;
  if (!std::getline(in, header) || trim(header).empty()) {
    throw Error(Errc::empty_file, path.string() + " is empty");
  }
  const auto head = split_csv_line(header);
  if (head.empty() || head[0] != "y") {
    throw Error(Errc::parse_error,
                "header must start with 'y' (got '" + header + "')");
  }
  const long p_raw = static_cast<long>(head.size()) - 1;
  if (p_raw < 1) {
    throw Error(Errc::parse_error, "header lists no covariate columns");
  }
  for (long j = 1; j <= p_raw; ++j) {
    if (head[static_cast<std::size_t>(j)] != "x" + std::to_string(j)) {
      throw Error(Errc::parse_error, "header column " + std::to_string(j + 1) +
                                         " must be x" + std::to_string(j));
    }
  }

  std::vector<double> ys;
  std::vector<std::vector<double>> xs;
  std::string line;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (static_cast<long>(cells.size()) != p_raw + 1) {
      throw Error(Errc::parse_error,
                  "row " + std::to_string(lineno) + ": expected " +
                      std::to_string(p_raw + 1) + " columns, got " +
                      std::to_string(cells.size()));
    }
    const double yv = parse_number(cells[0], lineno, 1);
    if (yv != 0.0 && yv != 1.0) {
      throw Error(Errc::invalid_response,
                  "row " + std::to_string(lineno) + ": y = " + cells[0] +
                      " is not in {0,1}");
    }
    ys.push_back(yv);
    std::vector<double> row;
    for (long j = 1; j <= p_raw; ++j) {
      row.push_back(
          parse_number(cells[static_cast<std::size_t>(j)], lineno, j + 1));
    }
    xs.push_back(std::move(row));
  }
  if (ys.empty()) {
    throw Error(Errc::empty_file, path.string() + " holds no data rows");
  }

  const long n = static_cast<long>(ys.size());
  const long p = p_raw + (add_intercept ? 1 : 0);
  Eigen::MatrixXd X(n, p);
  Eigen::VectorXi y(n);
  for (long i = 0; i < n; ++i) {
    y[i] = static_cast<int>(ys[static_cast<std::size_t>(i)]);
    long j0 = 0;
    if (add_intercept) X(i, j0++) = 1.0;
    for (long j = 0; j < p_raw; ++j) {
      X(i, j0 + j) = xs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return {std::move(X), std::move(y)};
}

Eigen::MatrixXd load_matrix_csv(const std::filesystem::path& path) {
  const auto rows = read_numeric_rows(path);
  Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      M(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return M;
}

Eigen::VectorXd load_vector_csv(const std::filesystem::path& path) {
  Eigen::MatrixXd M = load_matrix_csv(path);
  if (M.cols() == 1) return M.col(0);
  if (M.rows() == 1) return M.row(0).transpose();
  throw Error(Errc::parse_error,
              path.string() + " is not a vector (one row or one column)");
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(Errc::io_failure, "cannot write " + tmp.string());
    }
    out << content;
    if (!out.flush()) {
      throw Error(Errc::io_failure, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(Errc::io_failure,
                "rename to " + path.string() + " failed: " + ec.message());
  }
}

void write_samples_csv(const std::filesystem::path& path,
                       const Eigen::MatrixXd& draws) {
  std::string out;
  out.reserve(static_cast<std::size_t>(draws.size()) * 20 + 64);
  for (Eigen::Index j = 0; j < draws.cols(); ++j) {
    out += (j == 0 ? "beta_" : ",beta_") + std::to_string(j + 1);
  }
  out += "\n";
  for (Eigen::Index i = 0; i < draws.rows(); ++i) {
    for (Eigen::Index j = 0; j < draws.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(draws(i, j));
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

Eigen::MatrixXd read_samples_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::io_failure, "cannot open " + path.string());
  }
  std::string header;
  std::getline(in, header);  // beta_1..beta_p
  std::vector<std::vector<double>> rows;
  std::string line;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    std::vector<double> row;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      row.push_back(parse_number(cells[c], lineno, static_cast<long>(c) + 1));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw Error(Errc::empty_file, path.string() + " holds no draws");
  }
  Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      M(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return M;
}

ProbitData synthetic_probit_data(long n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXi y(n);
  // antibody-level style covariates: correlated, mildly skewed scales
  const Eigen::Vector3d beta_true(-1.8, 4.4, 2.4);
  for (long i = 0; i < n; ++i) {
    const double u = rng.normal();
    const double x1 = 0.6 * u + 0.4 * rng.normal();
    const double x2 = 0.5 * u + 0.6 * rng.normal();
    X(i, 0) = x1;
    X(i, 1) = x2;
    const double t = beta_true[0] + beta_true[1] * x1 + beta_true[2] * x2;
    y[i] = (t + rng.normal() > 0.0) ? 1 : 0;
  }
  return {std::move(X), std::move(y)};
}

void write_synthetic_csv(const std::filesystem::path& path, long n,
                         std::uint64_t seed) {
  const ProbitData data = synthetic_probit_data(n, seed);
  std::string out = "y,x1,x2\n";
  for (long i = 0; i < n; ++i) {
    out += std::to_string(data.y[i]) + "," + format_double(data.X(i, 0)) +
           "," + format_double(data.X(i, 1)) + "\n";
  }
  write_file_atomic(path, out);
}

}  // namespace probitda
