#include "effdof/cli.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "effdof/applications.hpp"
#include "effdof/errors.hpp"
#include "effdof/io.hpp"
#include "effdof/montecarlo.hpp"

namespace effdof::cli {

namespace {

namespace fs = std::filesystem;

struct OutputOptions {
  std::string format = "csv";
  int precision = io::kDefaultPrecision;

  void attach(CLI::App& cmd) {
    cmd.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json", "markdown"}))
        ->capture_default_str();
    cmd.add_option("--precision", precision, "Decimals printed for real values")
        ->check(CLI::Range(0, io::kMaxPrecision))
        ->capture_default_str();
  }

  std::string render(const io::Table& table) const {
    return io::render(table, io::parse_format(format), precision);
  }
};

struct SimulateOptions {
  std::string preset;
  std::string config_path;
  std::vector<int> k_values;
  std::vector<double> nu_values;
  std::string weights = "equal";
  std::string equal_scale = "inverse-k";
  double sd = 0.3;
  bool fix_weights = false;
  double sigma_sq = 1.0;
  std::uint64_t replicates = 100000;
  std::uint64_t seed = 0;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string layout;
  std::string out_dir;
  OutputOptions output;

  CLI::Option* k_opt = nullptr;
  CLI::Option* nu_opt = nullptr;
  CLI::Option* weights_opt = nullptr;
  CLI::Option* scale_opt = nullptr;
  CLI::Option* sd_opt = nullptr;
  CLI::Option* fix_opt = nullptr;
  CLI::Option* sigma_opt = nullptr;
  CLI::Option* replicates_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, 0, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out << text;
}

// Base configuration from --preset / --config, then explicit flags on top.
struct ResolvedRun {
  SimConfig config;
  std::string preset;
  std::string layout;
  std::string seed_source;
};

ResolvedRun resolve(const SimulateOptions& o) {
  ResolvedRun run;
  SimConfig& c = run.config;
  std::optional<io::SimLayout> implied_layout;

  if (!o.config_path.empty()) {
    c = io::config_from_manifest_json(read_text(o.config_path));
    run.seed_source = "config";
  }
  if (!o.preset.empty()) {
    run.preset = o.preset;
    if (o.preset == "tables123") {
      c.k_values = {2, 4, 8, 16, 32, 64};
      c.nu_values = {1, 2, 4, 8, 16, 32};
      c.weight_mode = WeightMode::Equal;
      c.equal_scale = EqualScale::InverseK;
      implied_layout = io::SimLayout::Bias;
    } else {
      c.k_values = {16, 32, 64};
      c.nu_values = {1, 5, 50, 500};
      if (o.preset == "tables45-random") {
        c.weight_mode = WeightMode::RandomNormal;
        c.weight_sd = 0.3;
      } else {
        c.weight_mode = WeightMode::Equal;
        c.equal_scale = EqualScale::Unit;
      }
      implied_layout = io::SimLayout::Ratio;
    }
  }
  if (o.k_opt->count() > 0) c.k_values = o.k_values;
  if (o.nu_opt->count() > 0) c.nu_values = o.nu_values;
  if (o.weights_opt->count() > 0) {
    c.weight_mode = o.weights == "random" ? WeightMode::RandomNormal : WeightMode::Equal;
  }
  if (o.scale_opt->count() > 0) {
    c.equal_scale = o.equal_scale == "unit" ? EqualScale::Unit : EqualScale::InverseK;
  }
  if (o.sd_opt->count() > 0) c.weight_sd = o.sd;
  if (o.fix_opt->count() > 0) c.fix_weights = o.fix_weights;
  if (o.sigma_opt->count() > 0) c.sigma_sq = o.sigma_sq;
  if (o.replicates_opt->count() > 0 || (o.config_path.empty())) c.replicates = o.replicates;
  if (o.seed_opt->count() > 0) {
    c.seed = o.seed;
    run.seed_source = "flag";
  } else if (run.seed_source.empty()) {
    std::random_device entropy;
    c.seed = (static_cast<std::uint64_t>(entropy()) << 32) ^ entropy();
    run.seed_source = "entropy";
  }

  if (c.k_values.empty() || c.nu_values.empty()) {
    throw ValidationError("simulate needs --preset, --config, or both --k and --nu");
  }
  c.validate();

  if (!o.layout.empty()) {
    run.layout = o.layout;
  } else if (implied_layout) {
    run.layout = std::string(io::to_string(*implied_layout));
  } else {
    run.layout = c.weight_mode == WeightMode::RandomNormal ? "ratio" : "bias";
  }
  return run;
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
  const ResolvedRun run = resolve(o);
  if (run.seed_source == "entropy") err << "seed: " << run.config.seed << "\n";

  const auto start = std::chrono::steady_clock::now();
  const auto cells = run_grid(run.config, ExecutionOptions{o.threads});
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  const std::string table =
      o.output.render(io::simulation_table(cells, io::parse_layout(run.layout)));
  out << table;

  if (!o.out_dir.empty()) {
    const fs::path dir(o.out_dir);
    fs::create_directories(dir);
    io::RunManifest manifest;
    manifest.config = run.config;
    manifest.preset = run.preset;
    manifest.layout = run.layout;
    manifest.seed_source = run.seed_source;
    manifest.threads = o.threads;
    manifest.wall_clock_seconds = elapsed.count();
    for (const auto& c : cells) manifest.weight_rejections += c.weight_rejections;

    const auto format = io::parse_format(o.output.format);
    const char* ext = format == io::Format::Csv ? "csv" : format == io::Format::Json ? "json" : "md";
    write_text(dir / fmt::format("table.{}", ext), table);
    write_text(dir / "cells.csv",
               io::render(io::simulation_cells_table(cells), io::Format::Csv, io::kMaxPrecision));
    write_text(dir / "manifest.json", io::manifest_to_json(manifest));
  }
  return kSuccess;
}

// Parses the command line. Returns an exit code when parsing already finished the run (help,
// version, or a usage error), nullopt when a subcommand should execute.
std::optional<int> dispatch(CLI::App& app, const std::function<void()>& parse, std::ostream& out,
                            std::ostream& err) {
  try {
    parse();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kValidationError;
  }
  if (app.get_subcommands().empty()) return kValidationError;
  return std::nullopt;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"effdof"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Effective degrees of freedom for weighted sums of variance components", "effdof"};
  app.require_subcommand(1);
  app.set_version_flag("--version", EFFDOF_VERSION);

  // estimate
  std::string estimate_input;
  OutputOptions estimate_output;
  auto* estimate = app.add_subcommand("estimate", "Df estimators for a components file");
  estimate->add_option("--input", estimate_input, "CSV with header weight,variance,dof")
      ->required();
  estimate_output.attach(*estimate);

  // simulate
  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Chi-square Monte Carlo experiment");
  simulate->add_option("--preset", sim.preset, "Built-in grid")
      ->check(CLI::IsMember({"tables123", "tables45-random", "tables45-equal"}));
  simulate->add_option("--config", sim.config_path, "Re-run the config echoed in a manifest.json");
  sim.k_opt = simulate->add_option("--k", sim.k_values, "Component counts K")->delimiter(',');
  sim.nu_opt = simulate->add_option("--nu", sim.nu_values, "Component df values")->delimiter(',');
  sim.weights_opt = simulate->add_option("--weights", sim.weights, "equal|random")
                        ->check(CLI::IsMember({"equal", "random"}));
  sim.scale_opt = simulate->add_option("--equal-scale", sim.equal_scale,
                                       "Equal weights: inverse-k (w=1/K) or unit (w=1)")
                      ->check(CLI::IsMember({"inverse-k", "unit"}));
  sim.sd_opt = simulate->add_option("--sd", sim.sd, "SD of Normal(1, sd) random weights");
  sim.fix_opt = simulate->add_flag("--fix-weights", sim.fix_weights,
                                   "Draw random weights once per cell, not per replicate");
  sim.sigma_opt = simulate->add_option("--sigma2", sim.sigma_sq, "True common variance");
  sim.replicates_opt =
      simulate->add_option("--replicates", sim.replicates, "Replicates per cell")
          ->capture_default_str();
  sim.seed_opt = simulate->add_option("--seed", sim.seed, "64-bit seed (default: entropy)");
  simulate->add_option("--threads", sim.threads, "Worker threads; never changes results")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--layout", sim.layout, "bias|ratio table layout")
      ->check(CLI::IsMember({"bias", "ratio"}));
  simulate->add_option("--out", sim.out_dir, "Directory for table, cells.csv and manifest.json");
  sim.output.attach(*simulate);

  // jackknife
  std::string jackknife_input;
  OutputOptions jackknife_output;
  auto* jackknife = app.add_subcommand("jackknife", "Corrected df from jackknife pseudo-values");
  jackknife->add_option("--input", jackknife_input, "One pseudo-value per line")->required();
  jackknife_output.attach(*jackknife);

  // welch
  TwoSampleSummary ts;
  OutputOptions welch_output;
  auto* welch = app.add_subcommand("welch", "Welch two-sample df, uncorrected and corrected");
  welch->add_option("--n1", ts.n1, "Size of sample 1")->required();
  welch->add_option("--n2", ts.n2, "Size of sample 2")->required();
  welch->add_option("--s1sq", ts.s1_sq, "Variance of sample 1")->required();
  welch->add_option("--s2sq", ts.s2_sq, "Variance of sample 2")->required();
  welch_output.attach(*welch);

  // mi
  MiVariance mi;
  OutputOptions mi_output;
  auto* mi_cmd = app.add_subcommand(
      "mi", "Multiple-imputation total variance and df; (M+1)/M equals Rubin's 1 + 1/M");
  mi_cmd->add_option("--var-sampling", mi.sampling_variance, "Sampling variance")->required();
  mi_cmd->add_option("--nu-sampling", mi.sampling_dof, "Sampling variance df")->required();
  mi_cmd->add_option("--var-imputation", mi.imputation_variance, "Between-imputation variance")
      ->required();
  mi_cmd->add_option("--m", mi.num_imputations, "Number of imputations M")->required();
  mi_output.attach(*mi_cmd);

  if (const auto code = dispatch(app, [&] { app.parse(argc, argv); }, out, err)) return *code;

  try {
    if (estimate->parsed()) {
      const auto set = io::read_components_file(estimate_input);
      out << estimate_output.render(io::estimate_table(set));
    } else if (simulate->parsed()) {
      return cmd_simulate(sim, out, err);
    } else if (jackknife->parsed()) {
      const PseudoValueSet pv(io::read_pseudo_values_file(jackknife_input));
      io::Table t{{"statistic", "value"}, {{io::Label{"jackknife_df"}, jackknife_df(pv)}}};
      out << jackknife_output.render(t);
    } else if (welch->parsed()) {
      io::Table t{{"estimator", "df"},
                  {{io::Label{"satterthwaite"}, welch_satterthwaite_df(ts)},
                   {io::Label{"corrected"}, welch_corrected_df(ts)}}};
      out << welch_output.render(t);
    } else if (mi_cmd->parsed()) {
      io::Table t{{"quantity", "value"},
                  {{io::Label{"total_variance"}, mi_total_variance(mi)},
                   {io::Label{"total_df"}, mi_total_df(mi)}}};
      out << mi_output.render(t);
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kValidationError;
  } catch (const DegenerateComponents& e) {
    err << "degenerate components: " << e.what() << "\n";
    return kDegenerate;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInternalError;
  }
  return kSuccess;
}

}  // namespace effdof::cli
