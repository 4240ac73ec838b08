#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "blockdyn/blockstats.hpp"
#include "blockdyn/config.hpp"
#include "blockdyn/network.hpp"

namespace blockdyn::harness {

struct MetricsRow {
  std::int64_t step = 0;
  double train_loss_batch = 0;
  double test_loss = 0;
  double test_acc = 0;
  double test_acc_offboundary = 0;
  double n1_plus = 0, n1_minus = 0, n2_plus = 0, n2_minus = 0;
  double n_avg = 0, unbalance = 0, residual = 0;
  double g_mu_est = 0, g_mu_stderr = 0;
  double heavy_fraction = 0;
  // Not part of metrics.csv; carried for summaries.
  double total_aw_norm = 0;
  double err_concentration = 1.0;
};

// Exact metrics.csv header, in field order.
extern const char* const kMetricsHeader;
std::string metrics_csv_row(const MetricsRow& row);

struct SnapshotNeuron {
  double e1 = 0, e2 = 0, mu1 = 0, mu2 = 0, perp_norm = 0, a = 0;
  int block = 4;
  int heavy = 0;
};

struct SnapshotRecord {
  std::int64_t step = 0;
  std::vector<SnapshotNeuron> neurons;
};

struct GrowthAuditRow {
  std::int64_t step = 0;   // ratio is N(step+1)/N(step)
  double n_avg = 0;
  double ratio = 1.0;
  double g_mu = 0;
};

struct EvalResult {
  double test_loss = 0;
  double test_acc = 0;
  double test_acc_offboundary = 0;
  double err_concentration = 1.0;  // 1.0 by convention when nothing misclassified
};

// Fresh-sample evaluation of an arbitrary predictor f(x).
EvalResult eval_test_metrics(const std::function<double(const std::vector<double>&)>& predict,
                             const dist::InputSpec& input, const dist::LabelSpec& label,
                             std::int64_t n, double eps_boundary, rng::Stream eval_stream,
                             rng::Stream noise_stream);

EvalResult eval_test_metrics(const net::NetworkState& network, const dist::InputSpec& input,
                             const dist::LabelSpec& label, std::int64_t n,
                             double eps_boundary, rng::Stream eval_stream,
                             rng::Stream noise_stream);

struct RunResult {
  std::vector<MetricsRow> metrics;
  std::vector<SnapshotRecord> snapshots;
  std::vector<GrowthAuditRow> growth_audit;
  net::NetworkState final_net;
  double max_u_after_100 = 0;
  double max_u = 0;
  std::int64_t stop_step = -1;  // first step with N_avg >= multiple * log log d
  std::uint64_t train_samples = 0;
  std::uint64_t eval_samples = 0;
  double max_gradient_identity_gap = 0;
  std::int64_t balance_violations = 0;  // |a|<=||w|| broken by an update
};

// Trains per the config; when write_files is set, streams metrics.csv,
// snapshots.jsonl, growth_audit.csv and run_summary.json into output_dir so a
// killed run leaves a valid prefix.
RunResult run_experiment(const config::ExperimentConfig& cfg, bool write_files = true);

// Regenerates the SVG plots for a finished (or partial) run directory.
// Throws listing the missing inputs when metrics/snapshots are absent.
void render_plots(const std::string& run_dir);

struct SweepRow {
  std::string name;
  std::string patch;
  bool ok = false;
  std::string error;
  MetricsRow final_row;
  bool plateau = false;
  double angular_dispersion = 0;
};

// Runs base with each override patch (list of key=value), one subdirectory
// per patch. Individual failures are recorded and the sweep continues.
std::vector<SweepRow> sweep(const config::ExperimentConfig& base,
                            const std::vector<std::vector<std::string>>& patches,
                            const std::string& sweep_dir);

// Loss-plateau rule: relative test-loss change below 1% across the final 20%
// of metric rows.
bool detect_plateau(const std::vector<MetricsRow>& rows);

// Concentration of heavy-neuron angles around the four diagonal directions:
// 1 - |mean exp(4 i angle)|; 0 means perfectly aligned.
double angular_dispersion(const net::NetworkState& network, double zeta_prime);

// Human-readable summary of a run directory (reads the files back).
std::string report_text(const std::string& run_dir);

}  // namespace blockdyn::harness
