#include "probitda/experiment.hpp"

#include <CLI11.hpp>
#include <future>
#include <iostream>
#include <set>

#include "probitda/errors.hpp"
#include "probitda/io.hpp"
#include "probitda/theory.hpp"

namespace probitda::cli {

namespace {

using nlohmann::json;

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

void require_keys(const json& j, const std::set<std::string>& allowed,
                  const std::string& what) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      throw Error(Errc::invalid_config,
                  what + ": unknown field '" + key + "'");
    }
  }
}

PriorSpec parse_prior(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object() || !j.contains("type")) {
    throw Error(Errc::invalid_config, "prior must be an object with a type");
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "proper_normal") {
    require_keys(j, {"type", "Q_path", "v_path"}, "prior");
    return ProperNormal{
        load_matrix_csv(resolve(base_dir, j.at("Q_path").get<std::string>())),
        load_vector_csv(resolve(base_dir, j.at("v_path").get<std::string>()))};
  }
  if (type == "gprior") {
    require_keys(j, {"type", "g"}, "prior");
    return GPrior{j.at("g").get<double>()};
  }
  if (type == "improper_flat") {
    require_keys(j, {"type"}, "prior");
    return ImproperFlat{};
  }
  throw Error(Errc::invalid_config, "unknown prior type '" + type + "'");
}

json trace_class_json(const TraceClassVerdict& v) {
  json eig = json::array();
  for (Eigen::Index i = 0; i < v.condition_A_eigenvalues.size(); ++i) {
    eig.push_back(v.condition_A_eigenvalues[i]);
  }
  return {{"rank_ok", v.rank_ok},
          {"condition_A", v.condition_A},
          {"condition_A_eigenvalues", eig},
          {"condition_B", v.condition_B},
          {"verdict",
           v.verdict == TraceVerdict::TraceClass ? "TraceClass" : "Unknown"}};
}

json chen_shao_json(const ProprietyVerdict& v) {
  return {{"rank_ok", v.rank_ok},
          {"proper", v.proper},
          {"witness", v.positive_null_vector
                          ? vector_json(*v.positive_null_vector)
                          : json(nullptr)}};
}

std::string samples_name(int chain) {
  return "samples_" + std::to_string(chain) + ".csv";
}

}  // namespace

RunConfig parse_run_config(const json& j,
                           const std::filesystem::path& base_dir) {
  require_keys(j,
               {"data_path", "add_intercept", "prior", "sampler", "init_beta",
                "output_dir", "chains"},
               "config");
  RunConfig cfg;
  if (!j.contains("data_path") || !j.contains("prior") ||
      !j.contains("sampler") || !j.contains("output_dir")) {
    throw Error(Errc::invalid_config,
                "config needs data_path, prior, sampler and output_dir");
  }
  cfg.data_path = resolve(base_dir, j.at("data_path").get<std::string>());
  cfg.add_intercept = j.value("add_intercept", false);
  cfg.prior = parse_prior(j.at("prior"), base_dir);

  const json& s = j.at("sampler");
  require_keys(
      s, {"algorithm", "iterations", "burnin", "thin", "seed", "epsilon"},
      "sampler");
  cfg.sampler.algorithm =
      algorithm_from_name(s.value("algorithm", std::string("acda")));
  cfg.sampler.iterations = s.value("iterations", 1L);
  cfg.sampler.burnin = s.value("burnin", 0L);
  cfg.sampler.thin = s.value("thin", 1L);
  cfg.sampler.seed = s.value("seed", std::uint64_t{0});
  cfg.sampler.epsilon = s.value("epsilon", 0.5);
  cfg.sampler.validate();

  if (j.contains("init_beta") && !j.at("init_beta").is_null()) {
    const auto& arr = j.at("init_beta");
    if (!arr.is_array()) {
      throw Error(Errc::invalid_config, "init_beta must be an array");
    }
    Eigen::VectorXd init(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
      init[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    }
    cfg.init_beta = std::move(init);
  }
  cfg.output_dir = resolve(base_dir, j.at("output_dir").get<std::string>());
  cfg.chains = j.value("chains", 1);
  if (cfg.chains < 1) {
    throw Error(Errc::invalid_config, "chains must be >= 1");
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& config_path) {
  std::ifstream in(config_path);
  if (!in) {
    throw Error(Errc::io_failure, "cannot open " + config_path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error,
                config_path.string() + ": " + std::string(e.what()));
  }
  return parse_run_config(j, config_path.parent_path());
}

json diagnostics_json(const DiagnosticsReport& rep) {
  json acf = json::array();
  json rm = json::array();
  for (const auto& a : rep.acf) acf.push_back(vector_json(a));
  for (const auto& r : rep.running_means) rm.push_back(vector_json(r));
  return {{"mean", vector_json(rep.mean)},
          {"sd", vector_json(rep.sd)},
          {"sigma2_hat", vector_json(rep.sigma2_hat)},
          {"ess", vector_json(rep.ess)},
          {"acf", acf},
          {"running_means",
           {{"checkpoints", rep.checkpoints}, {"values", rm}}}};
}

void run_command(const RunConfig& cfg) {
  const ProbitData data = load_csv(cfg.data_path, cfg.add_intercept);
  const PosteriorContext ctx = build_context(data, cfg.prior);
  const Eigen::VectorXd init =
      cfg.init_beta ? *cfg.init_beta : Eigen::VectorXd::Zero(ctx.p());
  if (init.size() != ctx.p()) {
    throw Error(Errc::dimension_mismatch,
                "init_beta has length " + std::to_string(init.size()) +
                    " but p = " + std::to_string(ctx.p()));
  }

  // chains share the immutable context; each owns its seed and stream
  std::vector<std::future<SampleMatrix>> futures;
  for (int k = 0; k < cfg.chains; ++k) {
    SamplerConfig sc = cfg.sampler;
    sc.seed = cfg.sampler.seed + static_cast<std::uint64_t>(k);
    futures.push_back(std::async(std::launch::async, [&ctx, sc, &init] {
      return run_chain(ctx, sc, init);
    }));
  }
  std::vector<SampleMatrix> runs;
  for (auto& f : futures) runs.push_back(f.get());

  std::filesystem::create_directories(cfg.output_dir);
  json chain_meta = json::array();
  for (int k = 0; k < cfg.chains; ++k) {
    const SampleMatrix& run = runs[static_cast<std::size_t>(k)];
    write_samples_csv(cfg.output_dir / samples_name(k + 1), run.draws);
    const DiagnosticsReport rep = diagnose(run);
    write_file_atomic(
        cfg.output_dir / ("diagnostics_" + std::to_string(k + 1) + ".json"),
        diagnostics_json(rep).dump(2) + "\n");
    chain_meta.push_back(
        {{"chain", k + 1},
         {"seed", run.meta.seed},
         {"wall_seconds", run.meta.wall_seconds},
         {"gstep_proposals", run.meta.gstep.proposals},
         {"gstep_accepts", run.meta.gstep.accepts},
         {"gstep_acceptance_rate", run.meta.gstep.acceptance_rate()}});
  }

  const json meta = {{"algorithm", algorithm_name(cfg.sampler.algorithm)},
                     {"prior", ctx.regime},
                     {"data_path", cfg.data_path.string()},
                     {"add_intercept", cfg.add_intercept},
                     {"n", ctx.n()},
                     {"p", ctx.p()},
                     {"chains", cfg.chains},
                     {"seed", cfg.sampler.seed},
                     {"iterations", cfg.sampler.iterations},
                     {"burnin", cfg.sampler.burnin},
                     {"thin", cfg.sampler.thin},
                     {"epsilon", cfg.sampler.epsilon},
                     {"kept_per_chain", runs.front().draws.rows()},
                     {"init_beta", vector_json(init)},
                     {"chain_meta", chain_meta}};
  write_file_atomic(cfg.output_dir / "meta.json", meta.dump(2) + "\n");
}

json theory_json(const ProbitData& data, const PriorSpec& prior) {
  json out = {{"lambda_max", nullptr}, {"Lambda", nullptr}, {"c0", nullptr},
              {"rho", nullptr},        {"L", nullptr},      {"A1", nullptr},
              {"A2", nullptr},         {"trace_class", nullptr},
              {"chen_shao", chen_shao_json(chen_shao_check(data))}};
  if (std::holds_alternative<ImproperFlat>(prior)) {
    return out;  // drift/trace sections stay not-applicable
  }
  const PosteriorContext ctx = build_context(data, prior);
  const DriftReport drift = drift_constants(ctx);
  out["lambda_max"] = drift.lambda_max;
  out["Lambda"] = drift.Lambda;
  out["c0"] = drift.c0;
  out["rho"] = drift.rho;
  out["L"] = drift.L;
  out["A1"] = drift.A1;
  out["A2"] = drift.A2;
  out["trace_class"] = trace_class_json(trace_class_check(data, prior));
  return out;
}

void check_command(const RunConfig& cfg) {
  const ProbitData data = load_csv(cfg.data_path, cfg.add_intercept);
  const json report = theory_json(data, cfg.prior);
  std::filesystem::create_directories(cfg.output_dir);
  write_file_atomic(cfg.output_dir / "theory.json", report.dump(2) + "\n");
  std::cout << report.dump(2) << std::endl;
}

void compare_command(const std::vector<std::filesystem::path>& run_dirs,
                     const std::filesystem::path& out_dir, int max_lag) {
  if (run_dirs.size() < 2) {
    throw Error(Errc::invalid_config, "compare needs at least two runs");
  }
  std::vector<std::pair<std::string, SampleMatrix>> runs;
  for (const auto& dir : run_dirs) {
    if (!std::filesystem::exists(dir / "meta.json")) {
      throw Error(Errc::io_failure,
                  dir.string() + " is not a completed run (meta.json absent)");
    }
    std::ifstream meta_in(dir / "meta.json");
    json meta;
    meta_in >> meta;
    const int chains = meta.value("chains", 1);
    for (int k = 1; k <= chains; ++k) {
      SampleMatrix run;
      run.draws = read_samples_csv(dir / samples_name(k));
      run.meta.algorithm = meta.value("algorithm", std::string("?"));
      run.meta.regime = meta.value("prior", std::string("?"));
      std::string label = dir.filename().string();
      if (chains > 1) label += "/chain_" + std::to_string(k);
      runs.emplace_back(std::move(label), std::move(run));
    }
  }

  const ComparisonReport rep = compare_chains(runs, max_lag);
  const std::filesystem::path cmp = out_dir / "compare";
  std::filesystem::create_directories(cmp);

  const Eigen::Index p = runs.front().second.draws.cols();
  json summary = json::array();
  for (std::size_t c = 0; c < rep.labels.size(); ++c) {
    const DiagnosticsReport& d = rep.chains[c];
    summary.push_back(
        {{"label", rep.labels[c]},
         {"algorithm", runs[c].second.meta.algorithm},
         {"prior", runs[c].second.meta.regime},
         {"mean", vector_json(d.mean)},
         {"sd", vector_json(d.sd)},
         {"sigma2_hat", vector_json(d.sigma2_hat)},
         {"ess", vector_json(d.ess)},
         {"lag1_acf",
          vector_json(rep.lag1_acf.row(static_cast<Eigen::Index>(c)))}});
  }
  const json report = {{"labels", rep.labels},
                       {"p", p},
                       {"chains", summary},
                       {"lag1_order", rep.lag1_order},
                       {"notes", rep.notes}};
  write_file_atomic(cmp / "comparison.json", report.dump(2) + "\n");

  for (Eigen::Index j = 0; j < p; ++j) {
    std::string acf_csv = "lag";
    for (const auto& label : rep.labels) acf_csv += "," + label;
    acf_csv += "\n";
    Eigen::Index max_len = 0;
    for (const auto& d : rep.chains) {
      max_len = std::max(max_len, d.acf[j].size());
    }
    for (Eigen::Index lag = 0; lag < max_len; ++lag) {
      acf_csv += std::to_string(lag);
      for (const auto& d : rep.chains) {
        acf_csv += ",";
        if (lag < d.acf[j].size()) acf_csv += format_double(d.acf[j][lag]);
      }
      acf_csv += "\n";
    }
    write_file_atomic(
        cmp / ("acf_beta" + std::to_string(j + 1) + ".csv"), acf_csv);

    std::string rm_csv = "checkpoint";
    for (const auto& label : rep.labels) rm_csv += "," + label;
    rm_csv += "\n";
    std::size_t max_cp = 0;
    for (const auto& d : rep.chains) {
      max_cp = std::max(max_cp, d.checkpoints.size());
    }
    for (std::size_t k = 0; k < max_cp; ++k) {
      bool first = true;
      for (const auto& d : rep.chains) {
        if (first) {
          rm_csv += k < d.checkpoints.size()
                        ? std::to_string(d.checkpoints[k])
                        : std::string();
          first = false;
        }
        rm_csv += ",";
        if (k < d.checkpoints.size()) {
          rm_csv += format_double(
              d.running_means[j][static_cast<Eigen::Index>(k)]);
        }
      }
      rm_csv += "\n";
    }
    write_file_atomic(
        cmp / ("running_means_beta" + std::to_string(j + 1) + ".csv"),
        rm_csv);
  }
}

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"Gibbs samplers for Bayesian probit regression"};
  app.require_subcommand(1);

  std::string config_path;
  double epsilon_override = -1.0;
  auto* run = app.add_subcommand("run", "run seeded chains and write draws");
  run->add_option("--config", config_path, "config JSON")->required();
  run->add_option("--epsilon", epsilon_override,
                  "override the rejection-envelope parameter");

  std::string check_config;
  auto* check =
      app.add_subcommand("check", "drift constants and regime checks");
  check->add_option("--config", check_config, "config JSON")->required();

  std::vector<std::string> dirs;
  std::string compare_out;
  int max_lag = 50;
  auto* compare = app.add_subcommand("compare", "side-by-side diagnostics");
  compare->add_option("--out", compare_out, "output directory")->required();
  compare->add_option("--max-lag", max_lag, "ACF lags to tabulate");
  compare->add_option("runs", dirs, "completed run directories")->required();

  std::string synth_out;
  long synth_n = 55;
  std::uint64_t synth_seed = 20170101;
  auto* synth = app.add_subcommand("synth", "write a synthetic dataset");
  synth->add_option("--out", synth_out, "output CSV path")->required();
  synth->add_option("--n", synth_n, "number of rows");
  synth->add_option("--seed", synth_seed, "generator seed");

  try {
    app.parse(argc, argv);
    if (run->parsed()) {
      RunConfig cfg = load_run_config(config_path);
      if (epsilon_override >= 0.0) {
        cfg.sampler.epsilon = epsilon_override;
        cfg.sampler.validate();
      }
      run_command(cfg);
    } else if (check->parsed()) {
      check_command(load_run_config(check_config));
    } else if (compare->parsed()) {
      std::vector<std::filesystem::path> paths(dirs.begin(), dirs.end());
      compare_command(paths, compare_out, max_lag);
    } else if (synth->parsed()) {
      write_synthetic_csv(synth_out, synth_n, synth_seed);
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help
    std::cerr << nlohmann::json({{"error", "UsageError"},
                                 {"message", e.what()}})
                     .dump()
              << std::endl;
    return 2;
  } catch (const Error& e) {
    std::cerr << nlohmann::json({{"error", e.code_name()},
                                 {"message", e.what()}})
                     .dump()
              << std::endl;
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json({{"error", "NumericFailure"},
                                 {"message", e.what()}})
                     .dump()
              << std::endl;
    return 3;
  }
}

}  // namespace probitda::cli
