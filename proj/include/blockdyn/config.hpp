#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "blockdyn/distributions.hpp"

namespace blockdyn::config {

struct ExperimentConfig {
  std::string name = "run";
  int d = 120;
  int m = 100;
  double theta = 0.01;
  double eta = 0.05;
  int batch = 0;                   // V; 0 = default to ceil(d/theta)
  std::int64_t max_steps = 0;      // 0 = derive from total_samples
  std::int64_t total_samples = 0;  // M; used when max_steps is unset
  std::uint64_t seed = 1;
  std::int64_t snapshot_every = 1000;
  std::int64_t metrics_every = 100;
  std::int64_t eval_n = 4000;
  double eps_boundary = 0.3;
  double heavy_zeta_prime = 0.3;
  double heavy_h = 2.0;
  std::int64_t g_mu_samples = 1'000'000;
  double stop_mass_multiple = 1.0;  // reported stop step: first N_avg >= mult * log log d
  std::string output_dir = "runs/run";
  dist::InputSpec input;
  dist::LabelSpec label;
  // Envelope constants (diagnostics only).
  double env_c_zeta = 3.0;
  double env_c1 = 4.0;
  double env_c_b = 0.12;

  // Effective step count plus which of max_steps / total_samples decided it.
  std::int64_t effective_steps() const;
  std::string binding() const;
  int effective_batch() const;

  void validate() const;
};

// Flat "key = value" file, '#' comments, dotted keys. Unknown keys throw.
ExperimentConfig load_config(const std::string& path);

// Applies "key=value" overrides, last one wins. Unknown keys throw before any
// other work happens.
void apply_overrides(ExperimentConfig& cfg, const std::vector<std::string>& overrides);

// Applies one key; throws std::invalid_argument for unknown keys/bad values.
void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Serializes the fully resolved config, one key per line, stable order.
std::string resolved_text(const ExperimentConfig& cfg);

bool is_known_key(const std::string& key);

}  // namespace blockdyn::config
