#include "blockdyn/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "blockdyn/config.hpp"
#include "blockdyn/harness.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace blockdyn::cli {

std::string checks_to_json(const std::vector<lab::LemmaCheck>& checks) {
  json arr = json::array();
  for (const auto& c : checks) {
    json j;
    j["lemma_id"] = c.lemma_id;
    j["inputs"] = c.inputs;
    j["predicted_lo"] = c.predicted_lo;
    j["predicted_hi"] = c.predicted_hi;
    j["measured"] = c.measured;
    j["std_err"] = c.std_err;
    j["verdict"] = lab::to_string(c.verdict);
    j["tolerance_spec"] = c.tolerance_spec;
    if (!c.note.empty()) j["note"] = c.note;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::string checks_to_table(const std::vector<lab::LemmaCheck>& checks) {
  std::ostringstream os;
  os << std::left << std::setw(36) << "lemma" << std::setw(14) << "measured"
     << std::setw(12) << "std_err" << std::setw(26) << "predicted" << "verdict\n";
  os << std::string(96, '-') << "\n";
  int pass = 0, fail = 0, inconclusive = 0;
  for (const auto& c : checks) {
    std::ostringstream pred;
    pred.precision(5);
    pred << "[" << c.predicted_lo << ", " << c.predicted_hi << "]";
    os.precision(6);
    os << std::left << std::setw(36) << c.lemma_id << std::setw(14) << c.measured
       << std::setw(12) << c.std_err << std::setw(26) << pred.str()
       << lab::to_string(c.verdict) << "\n";
    switch (c.verdict) {
      case lab::Verdict::kPass: ++pass; break;
      case lab::Verdict::kFail: ++fail; break;
      case lab::Verdict::kInconclusive: ++inconclusive; break;
    }
  }
  os << std::string(96, '-') << "\n";
  os << pass << " pass, " << fail << " fail, " << inconclusive << " inconclusive\n";
  return os.str();
}

namespace {

config::ExperimentConfig load_with_overrides(const std::string& config_path,
                                             const std::vector<std::string>& overrides,
                                             const std::string& output_dir,
                                             std::uint64_t seed, bool seed_set) {
  config::ExperimentConfig cfg;
  if (!config_path.empty()) cfg = config::load_config(config_path);
  config::apply_overrides(cfg, overrides);
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  if (seed_set) cfg.seed = seed;
  cfg.validate();
  return cfg;
}

int run_train(const std::string& config_path, const std::vector<std::string>& overrides,
              const std::string& output_dir, std::uint64_t seed, bool seed_set,
              int verbosity) {
  const config::ExperimentConfig cfg =
      load_with_overrides(config_path, overrides, output_dir, seed, seed_set);
  const harness::RunResult res = harness::run_experiment(cfg, true);
  if (verbosity > 0) {
    std::cout << "trained " << cfg.name << " for " << cfg.effective_steps()
              << " steps into " << cfg.output_dir << "\n";
    std::cout << harness::report_text(cfg.output_dir);
  } else {
    std::cout << cfg.output_dir << "\n";
  }
  (void)res;
  return 0;
}

int run_verify(const std::string& suite, std::uint64_t seed, std::uint64_t mc_samples,
               std::uint64_t margin_samples, const std::string& out_path) {
  lab::SuiteOptions opt;
  opt.seed = seed;
  if (mc_samples > 0) opt.mc_samples = mc_samples;
  if (margin_samples > 0) opt.margin_samples = margin_samples;
  const auto checks = lab::run_suite(suite, opt);
  std::cout << checks_to_table(checks);
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::trunc);
    out << checks_to_json(checks);
    if (!out) throw std::runtime_error("cannot write report: " + out_path);
    std::cout << "report written to " << out_path << "\n";
  }
  for (const auto& c : checks)
    if (c.verdict == lab::Verdict::kFail) return 3;
  return 0;
}

int run_sweep(const std::string& config_path, const std::vector<std::string>& overrides,
              const std::vector<std::string>& patches, const std::string& output_dir,
              std::uint64_t seed, bool seed_set) {
  config::ExperimentConfig base =
      load_with_overrides(config_path, overrides, "", seed, seed_set);
  const std::string dir = output_dir.empty() ? "sweep" : output_dir;
  std::vector<std::vector<std::string>> patch_lists;
  for (const auto& p : patches) {
    std::vector<std::string> one;
    std::stringstream ss(p);
    std::string item;
    while (std::getline(ss, item, ';'))
      if (!item.empty()) one.push_back(item);
    patch_lists.push_back(std::move(one));
  }
  const auto rows = harness::sweep(base, patch_lists, dir);
  std::cout << std::left << std::setw(24) << "name" << std::setw(8) << "status"
            << std::setw(12) << "test_loss" << std::setw(12) << "acc" << std::setw(12)
            << "offb_acc" << std::setw(10) << "plateau" << "\n";
  for (const auto& r : rows) {
    std::cout << std::left << std::setw(24) << r.name << std::setw(8)
              << (r.ok ? "ok" : "error");
    if (r.ok) {
      std::cout << std::setw(12) << r.final_row.test_loss << std::setw(12)
                << r.final_row.test_acc << std::setw(12)
                << r.final_row.test_acc_offboundary << std::setw(10)
                << (r.plateau ? "yes" : "no");
    } else {
      std::cout << r.error;
    }
    std::cout << "\n";
  }
  std::cout << "summary: " << (fs::path(dir) / "sweep_summary.csv").string() << "\n";
  return 0;
}

}  // namespace

int parse_and_dispatch(const std::vector<std::string>& args) {
  CLI::App app{"zero-margin XOR block-dynamics laboratory"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, output_dir, suite = "all", out_path, run_dir;
  std::vector<std::string> overrides, patches;
  std::uint64_t seed = 0;
  std::uint64_t mc_samples = 0, margin_samples = 0;
  int verbosity = 1;
  app.add_flag_function("-q,--quiet", [&](std::int64_t) { verbosity = 0; },
                        "less output");

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* copt = sub->add_option("--config", config_path, "config file (key = value lines)");
    if (needs_config) copt->required();
    sub->add_option("--override", overrides, "config override key=value (repeatable)");
    sub->add_option("--output-dir", output_dir, "output directory override");
    sub->add_option("--seed", seed, "root seed override");
  };

  auto* train = app.add_subcommand("train", "train one run from a config");
  train->fallthrough();
  add_common(train, true);

  auto* verify = app.add_subcommand("verify", "run numerical verification suites");
  verify->fallthrough();
  verify->add_option("--suite", suite, "one of: gaussian-lemmas, phase1a, phase1b, "
                                       "block-rotation, margin, oracle-alignment, all");
  verify->add_option("--seed", seed, "suite seed");
  verify->add_option("--mc-samples", mc_samples, "samples per gradient estimate");
  verify->add_option("--margin-samples", margin_samples, "samples per margin estimate");
  verify->add_option("--report", out_path, "write the machine-readable report here");

  auto* sweep_cmd = app.add_subcommand("sweep", "run a patched family of configs");
  sweep_cmd->fallthrough();
  add_common(sweep_cmd, true);
  sweep_cmd->add_option("--patch", patches,
                        "semicolon-separated key=value set (repeatable, one run each)")
      ->required();

  auto* plot = app.add_subcommand("plot", "render SVG plots for a run directory");
  plot->fallthrough();
  plot->add_option("run_dir", run_dir, "run directory")->required();

  auto* report = app.add_subcommand("report", "print a run summary");
  report->fallthrough();
  report->add_option("run_dir", run_dir, "run directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      std::cout << app.help();
      return 0;
    }
    std::cerr << "argument error: " << e.what() << "\n";
    return 1;
  }

  const bool seed_set =
      train->count("--seed") > 0 || sweep_cmd->count("--seed") > 0;
  try {
    if (*train)
      return run_train(config_path, overrides, output_dir, seed, seed_set, verbosity);
    if (*verify)
      return run_verify(suite, verify->count("--seed") ? seed : 7, mc_samples,
                        margin_samples, out_path);
    if (*sweep_cmd)
      return run_sweep(config_path, overrides, patches, output_dir, seed, seed_set);
    if (*plot) {
      harness::render_plots(run_dir);
      std::cout << "plots written to " << run_dir << "\n";
      return 0;
    }
    if (*report) {
      std::cout << harness::report_text(run_dir);
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

int parse_and_dispatch(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return parse_and_dispatch(args);
}

}  // namespace blockdyn::cli
