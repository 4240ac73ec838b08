#include "blockdyn/config.hpp"

#include <cmath>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace blockdyn::config {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (...) {
    throw std::invalid_argument("config key '" + key + "': bad number '" + v + "'");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (...) {
    throw std::invalid_argument("config key '" + key + "': bad integer '" + v + "'");
  }
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"name", [](auto& c, auto&, auto& v) { c.name = v; }},
      {"d", [](auto& c, auto& k, auto& v) { c.d = static_cast<int>(parse_int(k, v)); }},
      {"m", [](auto& c, auto& k, auto& v) { c.m = static_cast<int>(parse_int(k, v)); }},
      {"theta", [](auto& c, auto& k, auto& v) { c.theta = parse_double(k, v); }},
      {"eta", [](auto& c, auto& k, auto& v) { c.eta = parse_double(k, v); }},
      {"batch", [](auto& c, auto& k, auto& v) { c.batch = static_cast<int>(parse_int(k, v)); }},
      {"max_steps", [](auto& c, auto& k, auto& v) { c.max_steps = parse_int(k, v); }},
      {"total_samples", [](auto& c, auto& k, auto& v) { c.total_samples = parse_int(k, v); }},
      {"seed",
       [](auto& c, auto& k, auto& v) { c.seed = static_cast<std::uint64_t>(parse_int(k, v)); }},
      {"snapshot_every", [](auto& c, auto& k, auto& v) { c.snapshot_every = parse_int(k, v); }},
      {"metrics_every", [](auto& c, auto& k, auto& v) { c.metrics_every = parse_int(k, v); }},
      {"eval_n", [](auto& c, auto& k, auto& v) { c.eval_n = parse_int(k, v); }},
      {"eps_boundary", [](auto& c, auto& k, auto& v) { c.eps_boundary = parse_double(k, v); }},
      {"heavy_zeta_prime",
       [](auto& c, auto& k, auto& v) { c.heavy_zeta_prime = parse_double(k, v); }},
      {"heavy_H", [](auto& c, auto& k, auto& v) { c.heavy_h = parse_double(k, v); }},
      {"g_mu_samples", [](auto& c, auto& k, auto& v) { c.g_mu_samples = parse_int(k, v); }},
      {"stop_mass_multiple",
       [](auto& c, auto& k, auto& v) { c.stop_mass_multiple = parse_double(k, v); }},
      {"output_dir", [](auto& c, auto&, auto& v) { c.output_dir = v; }},
      {"input.kind",
       [](auto& c, auto&, auto& v) { c.input.kind = dist::input_kind_from_string(v); }},
      {"input.aniso.lambda1",
       [](auto& c, auto& k, auto& v) { c.input.aniso_lambda1 = parse_double(k, v); }},
      {"input.aniso.lambda2",
       [](auto& c, auto& k, auto& v) { c.input.aniso_lambda2 = parse_double(k, v); }},
      {"input.mixture.mean_norm",
       [](auto& c, auto& k, auto& v) { c.input.mixture_mean_norm = parse_double(k, v); }},
      {"input.mixture.cluster_std",
       [](auto& c, auto& k, auto& v) { c.input.mixture_cluster_std = parse_double(k, v); }},
      {"label.kind",
       [](auto& c, auto&, auto& v) { c.label.kind = dist::label_kind_from_string(v); }},
      {"label.noise_rate",
       [](auto& c, auto& k, auto& v) { c.label.noise_rate = parse_double(k, v); }},
      {"envelopes.c_zeta", [](auto& c, auto& k, auto& v) { c.env_c_zeta = parse_double(k, v); }},
      {"envelopes.C1", [](auto& c, auto& k, auto& v) { c.env_c1 = parse_double(k, v); }},
      {"envelopes.c_b", [](auto& c, auto& k, auto& v) { c.env_c_b = parse_double(k, v); }},
  };
  return table;
}

}  // namespace

bool is_known_key(const std::string& key) { return setters().count(key) != 0; }

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  auto it = setters().find(key);
  if (it == setters().end()) throw std::invalid_argument("unknown config key: " + key);
  it->second(cfg, key, value);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  ExperimentConfig cfg;
  cfg.input.dimension = cfg.d;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected 'key = value'");
    apply_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  cfg.input.dimension = cfg.d;
  return cfg;
}

void apply_overrides(ExperimentConfig& cfg, const std::vector<std::string>& overrides) {
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("override must be key=value: " + ov);
    apply_key(cfg, trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
  }
  cfg.input.dimension = cfg.d;
}

int ExperimentConfig::effective_batch() const {
  if (batch > 0) return batch;
  return static_cast<int>(std::ceil(d / theta));
}

std::int64_t ExperimentConfig::effective_steps() const {
  if (max_steps > 0) return max_steps;
  if (total_samples > 0) return total_samples / effective_batch();
  return 10'000;
}

std::string ExperimentConfig::binding() const {
  if (max_steps > 0) return "max_steps";
  if (total_samples > 0) return "total_samples";
  return "default_steps";
}

void ExperimentConfig::validate() const {
  if (d < 2) throw std::invalid_argument("d must be >= 2");
  if (m < 4) throw std::invalid_argument("m must be >= 4");
  if (theta <= 0) throw std::invalid_argument("theta must be positive");
  if (eta < 0) throw std::invalid_argument("eta must be nonnegative");
  if (effective_batch() < 1) throw std::invalid_argument("batch must be >= 1");
  if (effective_steps() < 1) throw std::invalid_argument("step count must be >= 1");
  if (metrics_every < 1) throw std::invalid_argument("metrics_every must be >= 1");
  if (snapshot_every < 1) throw std::invalid_argument("snapshot_every must be >= 1");
  if (eval_n < 1000) throw std::invalid_argument("eval_n must be >= 1000");
  if (eps_boundary <= 0) throw std::invalid_argument("eps_boundary must be positive");
  if (output_dir.empty()) throw std::invalid_argument("output_dir must be set");
  input.validate();
  label.validate();
}

std::string resolved_text(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "name = " << cfg.name << "\n";
  os << "d = " << cfg.d << "\n";
  os << "m = " << cfg.m << "\n";
  os << "theta = " << cfg.theta << "\n";
  os << "eta = " << cfg.eta << "\n";
  os << "batch = " << cfg.effective_batch() << "\n";
  os << "max_steps = " << cfg.max_steps << "\n";
  os << "total_samples = " << cfg.total_samples << "\n";
  os << "# effective steps = " << cfg.effective_steps() << " (binding: " << cfg.binding()
     << (cfg.batch > 0 ? "" : "; batch defaulted to ceil(d/theta)") << ")\n";
  os << "seed = " << cfg.seed << "\n";
  os << "snapshot_every = " << cfg.snapshot_every << "\n";
  os << "metrics_every = " << cfg.metrics_every << "\n";
  os << "eval_n = " << cfg.eval_n << "\n";
  os << "eps_boundary = " << cfg.eps_boundary << "\n";
  os << "heavy_zeta_prime = " << cfg.heavy_zeta_prime << "\n";
  os << "heavy_H = " << cfg.heavy_h << "\n";
  os << "g_mu_samples = " << cfg.g_mu_samples << "\n";
  os << "stop_mass_multiple = " << cfg.stop_mass_multiple << "\n";
  os << "output_dir = " << cfg.output_dir << "\n";
  os << "input.kind = " << dist::to_string(cfg.input.kind) << "\n";
  if (cfg.input.kind == dist::InputKind::kAnisotropicGaussian) {
    os << "input.aniso.lambda1 = " << cfg.input.aniso_lambda1 << "\n";
    os << "input.aniso.lambda2 = " << cfg.input.aniso_lambda2 << "\n";
  }
  if (cfg.input.kind == dist::InputKind::kXorGaussianMixture) {
    os << "input.mixture.mean_norm = " << cfg.input.resolved_mean_norm() << "\n";
    os << "input.mixture.cluster_std = " << cfg.input.mixture_cluster_std << "\n";
  }
  os << "label.kind = " << dist::to_string(cfg.label.kind) << "\n";
  os << "label.noise_rate = " << cfg.label.noise_rate << "\n";
  os << "envelopes.c_zeta = " << cfg.env_c_zeta << "\n";
  os << "envelopes.C1 = " << cfg.env_c1 << "\n";
  os << "envelopes.c_b = " << cfg.env_c_b << "\n";
  os << "# g_mu definition: E_z[y(z) |l'(z)| relu(mu.z)], unconditional "
        "expectation, no class-prior factor\n";
  return os.str();
}

}  // namespace blockdyn::config
