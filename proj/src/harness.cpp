#include "blockdyn/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "blockdyn/oracle.hpp"
#include "blockdyn/svg.hpp"
#include "blockdyn/vecops.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace blockdyn::harness {

const char* const kMetricsHeader =
    "step,train_loss_batch,test_loss,test_acc,test_acc_offboundary,"
    "N1plus,N1minus,N2plus,N2minus,N_avg,U,R,g_mu_est,g_mu_stderr,heavy_fraction";

namespace {

std::string fmt_full(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                               std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, p);
}

}  // namespace

std::string metrics_csv_row(const MetricsRow& r) {
  std::ostringstream os;
  os << r.step << ',' << fmt_full(r.train_loss_batch) << ',' << fmt_full(r.test_loss)
     << ',' << fmt_full(r.test_acc) << ',' << fmt_full(r.test_acc_offboundary) << ','
     << fmt_full(r.n1_plus) << ',' << fmt_full(r.n1_minus) << ',' << fmt_full(r.n2_plus)
     << ',' << fmt_full(r.n2_minus) << ',' << fmt_full(r.n_avg) << ','
     << fmt_full(r.unbalance) << ',' << fmt_full(r.residual) << ','
     << fmt_full(r.g_mu_est) << ',' << fmt_full(r.g_mu_stderr) << ','
     << fmt_full(r.heavy_fraction);
  return os.str();
}

EvalResult eval_test_metrics(const std::function<double(const std::vector<double>&)>& predict,
                             const dist::InputSpec& input, const dist::LabelSpec& label,
                             std::int64_t n, double eps_boundary, rng::Stream eval_stream,
                             rng::Stream noise_stream) {
  if (n < 1000) throw std::invalid_argument("eval_test_metrics: n must be >= 1000");
  EvalResult out;
  std::int64_t correct = 0, off_total = 0, off_correct = 0;
  std::int64_t wrong = 0, wrong_in_region = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    const dist::LabeledSample s = dist::sample_at(input, label, eval_stream, noise_stream,
                                                  static_cast<std::uint64_t>(i));
    const double f = predict(s.x);
    out.test_loss += net::logistic_loss(f, s.y);
    const bool ok = s.y * f > 0;
    correct += ok;
    const bool off = dist::boundary_margin(s.z[0], s.z[1]) > eps_boundary;
    if (off) {
      ++off_total;
      off_correct += ok;
    }
    if (!ok) {
      ++wrong;
      wrong_in_region += !off;
    }
  }
  out.test_loss /= static_cast<double>(n);
  out.test_acc = static_cast<double>(correct) / static_cast<double>(n);
  out.test_acc_offboundary =
      off_total > 0 ? static_cast<double>(off_correct) / static_cast<double>(off_total) : 1.0;
  out.err_concentration =
      wrong > 0 ? static_cast<double>(wrong_in_region) / static_cast<double>(wrong) : 1.0;
  return out;
}

EvalResult eval_test_metrics(const net::NetworkState& network, const dist::InputSpec& input,
                             const dist::LabelSpec& label, std::int64_t n,
                             double eps_boundary, rng::Stream eval_stream,
                             rng::Stream noise_stream) {
  return eval_test_metrics(
      [&network](const std::vector<double>& x) { return net::forward(network, x); }, input,
      label, n, eps_boundary, eval_stream, noise_stream);
}

namespace {

SnapshotRecord make_snapshot(const net::NetworkState& network, double zeta_prime,
                             double h_const) {
  SnapshotRecord rec;
  rec.step = static_cast<std::int64_t>(network.step);
  const stats::HeavyReport heavy = stats::signal_heavy_check(network, zeta_prime, h_const);
  std::vector<char> is_heavy(network.neurons.size(), 0);
  for (std::size_t idx : heavy.heavy_set) is_heavy[idx] = 1;
  rec.neurons.reserve(network.neurons.size());
  for (std::size_t i = 0; i < network.neurons.size(); ++i) {
    const auto& nr = network.neurons[i];
    SnapshotNeuron sn;
    sn.e1 = nr.w[0];
    sn.e2 = nr.w[1];
    sn.mu1 = nr.w[0] * dist::kMu1[0] + nr.w[1] * dist::kMu1[1];
    sn.mu2 = nr.w[0] * dist::kMu2[0] + nr.w[1] * dist::kMu2[1];
    sn.perp_norm = vec::perp_norm(nr.w);
    sn.a = nr.a;
    sn.block = net::block_code(nr.block);
    sn.heavy = is_heavy[i];
    rec.neurons.push_back(sn);
  }
  return rec;
}

std::string snapshot_json_line(const SnapshotRecord& rec) {
  json j;
  j["schema_version"] = 1;
  j["step"] = rec.step;
  json arr = json::array();
  for (const auto& n : rec.neurons)
    arr.push_back({n.e1, n.e2, n.mu1, n.mu2, n.perp_norm, n.a, n.block, n.heavy});
  j["neurons"] = std::move(arr);
  return j.dump();
}

class RunWriter {
 public:
  RunWriter(const config::ExperimentConfig& cfg, bool enabled) : enabled_(enabled) {
    if (!enabled_) return;
    dir_ = cfg.output_dir;
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw std::runtime_error("cannot create output dir: " + dir_.string());
    write_file("config.resolved", config::resolved_text(cfg));
    metrics_.open(dir_ / "metrics.csv", std::ios::trunc);
    snapshots_.open(dir_ / "snapshots.jsonl", std::ios::trunc);
    audit_.open(dir_ / "growth_audit.csv", std::ios::trunc);
    if (!metrics_ || !snapshots_ || !audit_) abort_run("cannot open output files");
    metrics_ << kMetricsHeader << '\n' << std::flush;
    audit_ << "step,N_avg,ratio,g_mu_est\n" << std::flush;
  }

  void row(const MetricsRow& r) {
    if (!enabled_) return;
    metrics_ << metrics_csv_row(r) << '\n' << std::flush;
    if (!metrics_) abort_run("metrics.csv write failed");
  }

  void snapshot(const SnapshotRecord& rec) {
    if (!enabled_) return;
    snapshots_ << snapshot_json_line(rec) << '\n' << std::flush;
    if (!snapshots_) abort_run("snapshots.jsonl write failed");
  }

  void audit(const GrowthAuditRow& r) {
    if (!enabled_) return;
    audit_ << r.step << ',' << fmt_full(r.n_avg) << ',' << fmt_full(r.ratio) << ','
           << fmt_full(r.g_mu) << '\n'
           << std::flush;
  }

  void summary(const json& j) {
    if (!enabled_) return;
    write_file("run_summary.json", j.dump(2) + "\n");
  }

  void write_file(const std::string& name, const std::string& text) {
    if (!enabled_) return;
    std::ofstream out(dir_ / name, std::ios::trunc);
    out << text;
    if (!out) abort_run("write failed: " + name);
  }

  [[noreturn]] void abort_run(const std::string& why) {
    std::ofstream marker(dir_ / "ABORTED", std::ios::trunc);
    marker << why << '\n';
    throw std::runtime_error("run aborted: " + why);
  }

 private:
  bool enabled_;
  fs::path dir_;
  std::ofstream metrics_, snapshots_, audit_;
};

}  // namespace

RunResult run_experiment(const config::ExperimentConfig& cfg, bool write_files) {
  cfg.validate();
  const std::int64_t steps = cfg.effective_steps();
  const int batch_size = cfg.effective_batch();
  rng::Root root(cfg.seed);
  RunWriter writer(cfg, write_files);

  net::Hyper hyper{cfg.d, cfg.m, cfg.theta, cfg.eta, batch_size};
  net::NetworkState network = net::init_network(hyper, root.stream("init"));
  const rng::Stream train_noise = root.stream("train_noise");
  const rng::Stream eval_noise = root.stream("eval_noise");

  RunResult res;
  const double loglogd = std::log(std::log(static_cast<double>(cfg.d)));
  const double stop_target = cfg.stop_mass_multiple * std::max(loglogd, 0.1);

  std::vector<char> balance_ok(network.neurons.size(), 1);
  auto balance_flags = [&](std::vector<char>& flags) {
    for (std::size_t i = 0; i < network.neurons.size(); ++i)
      flags[i] = std::abs(network.neurons[i].a) <=
                 vec::norm2(network.neurons[i].w) * (1.0 + 1e-12);
  };
  balance_flags(balance_ok);

  stats::BlockStats cur_stats = stats::block_masses(network);

  double last_batch_loss = 0.0;
  auto emit_metrics = [&](std::int64_t step, double batch_loss) {
    MetricsRow row;
    row.step = step;
    row.train_loss_batch = batch_loss;
    const EvalResult ev =
        eval_test_metrics(network, cfg.input, cfg.label, cfg.eval_n, cfg.eps_boundary,
                          root.stream("eval", static_cast<std::uint64_t>(step)), eval_noise);
    res.eval_samples += static_cast<std::uint64_t>(cfg.eval_n);
    row.test_loss = ev.test_loss;
    row.test_acc = ev.test_acc;
    row.test_acc_offboundary = ev.test_acc_offboundary;
    row.err_concentration = ev.err_concentration;
    row.n1_plus = cur_stats.n1_plus;
    row.n1_minus = cur_stats.n1_minus;
    row.n2_plus = cur_stats.n2_plus;
    row.n2_minus = cur_stats.n2_minus;
    row.n_avg = cur_stats.n_avg;
    row.unbalance = cur_stats.unbalance;
    row.residual = cur_stats.residual;
    row.total_aw_norm = cur_stats.total_aw_norm;
    const auto g = oracle::estimate_g_mu(
        cur_stats.n_avg, static_cast<std::uint64_t>(cfg.g_mu_samples),
        root.stream("gmu", static_cast<std::uint64_t>(step)));
    row.g_mu_est = g.value;
    row.g_mu_stderr = g.std_err;
    row.heavy_fraction =
        stats::signal_heavy_check(network, cfg.heavy_zeta_prime, cfg.heavy_h).heavy_fraction;
    res.metrics.push_back(row);
    writer.row(row);
  };
  auto emit_snapshot = [&]() {
    res.snapshots.push_back(make_snapshot(network, cfg.heavy_zeta_prime, cfg.heavy_h));
    writer.snapshot(res.snapshots.back());
  };

  emit_snapshot();  // step 0

  // Growth audit window, slightly wider than the reporting window so the
  // boundary steps are available to consumers.
  const double audit_lo = 0.4, audit_hi = 2.5;
  const std::uint64_t audit_samples = 400'000;

  for (std::int64_t t = 0; t < steps; ++t) {
    const auto batch =
        dist::sample_batch(cfg.input, cfg.label, static_cast<std::uint64_t>(batch_size),
                           root.stream("train", static_cast<std::uint64_t>(t)), train_noise);
    res.train_samples += static_cast<std::uint64_t>(batch_size);
    const net::GradientSet grads = net::batch_gradients(network, batch);

    const bool metrics_step = (t % cfg.metrics_every) == 0;
    if (metrics_step) {
      double loss = 0.0;
      for (const auto& s : batch) loss += net::logistic_loss(net::forward(network, s.x), s.y);
      last_batch_loss = loss / static_cast<double>(batch.size());
      res.max_gradient_identity_gap =
          std::max(res.max_gradient_identity_gap, net::gradient_identity_gap(network, grads));
      emit_metrics(t, last_batch_loss);
    }

    const double prev_n_avg = cur_stats.n_avg;
    if (cfg.eta > 0) {
      net::sgd_step(network, grads, cfg.eta);
    } else {
      ++network.step;
    }

    cur_stats = stats::block_masses(network);
    const std::int64_t now = t + 1;
    res.max_u = std::max(res.max_u, cur_stats.unbalance);
    if (now >= 100) res.max_u_after_100 = std::max(res.max_u_after_100, cur_stats.unbalance);
    if (res.stop_step < 0 && cur_stats.n_avg >= stop_target) res.stop_step = now;

    std::vector<char> balance_now(network.neurons.size());
    balance_flags(balance_now);
    for (std::size_t i = 0; i < balance_now.size(); ++i)
      if (balance_ok[i] && !balance_now[i]) ++res.balance_violations;
    balance_ok.swap(balance_now);

    if (prev_n_avg >= audit_lo && prev_n_avg <= audit_hi) {
      GrowthAuditRow ar;
      ar.step = t;
      ar.n_avg = prev_n_avg;
      ar.ratio = cur_stats.n_avg / prev_n_avg;
      ar.g_mu = oracle::estimate_g_mu(prev_n_avg, audit_samples,
                                      root.stream("gmu_audit", static_cast<std::uint64_t>(t)))
                    .value;
      res.growth_audit.push_back(ar);
      writer.audit(ar);
    }

    if (now % cfg.snapshot_every == 0 && now != steps) emit_snapshot();
  }

  emit_metrics(steps, last_batch_loss);
  emit_snapshot();  // final step

  res.final_net = std::move(network);

  json summary;
  summary["steps"] = steps;
  summary["batch"] = batch_size;
  summary["binding"] = cfg.binding();
  summary["max_u"] = res.max_u;
  summary["max_u_after_100"] = res.max_u_after_100;
  summary["stop_step"] = res.stop_step;
  summary["stop_mass_target"] = stop_target;
  summary["train_samples"] = res.train_samples;
  summary["eval_samples"] = res.eval_samples;
  summary["max_gradient_identity_gap"] = res.max_gradient_identity_gap;
  summary["balance_violations"] = res.balance_violations;
  summary["final_err_concentration"] = res.metrics.back().err_concentration;
  summary["final_test_acc_offboundary"] = res.metrics.back().test_acc_offboundary;
  summary["final_heavy_fraction"] = res.metrics.back().heavy_fraction;
  summary["final_residual_ratio"] =
      res.metrics.back().total_aw_norm > 0
          ? res.metrics.back().residual / res.metrics.back().total_aw_norm
          : 0.0;
  summary["eta"] = cfg.eta;
  writer.summary(summary);
  return res;
}

// ---------------------------------------------------------------------------
// Plots
// ---------------------------------------------------------------------------

namespace {

std::vector<MetricsRow> read_metrics_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("missing file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty metrics file");
  if (line != kMetricsHeader) throw std::runtime_error("unexpected metrics header");
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
    if (vals.size() != 15) continue;  // ignore a torn trailing row
    MetricsRow r;
    r.step = static_cast<std::int64_t>(vals[0]);
    r.train_loss_batch = vals[1];
    r.test_loss = vals[2];
    r.test_acc = vals[3];
    r.test_acc_offboundary = vals[4];
    r.n1_plus = vals[5];
    r.n1_minus = vals[6];
    r.n2_plus = vals[7];
    r.n2_minus = vals[8];
    r.n_avg = vals[9];
    r.unbalance = vals[10];
    r.residual = vals[11];
    r.g_mu_est = vals[12];
    r.g_mu_stderr = vals[13];
    r.heavy_fraction = vals[14];
    rows.push_back(r);
  }
  return rows;
}

std::vector<SnapshotRecord> read_snapshots(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("missing file: " + path.string());
  std::vector<SnapshotRecord> recs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (...) {
      continue;  // torn trailing line from a killed run
    }
    SnapshotRecord rec;
    rec.step = j.at("step").get<std::int64_t>();
    for (const auto& n : j.at("neurons")) {
      SnapshotNeuron sn;
      sn.e1 = n.at(0).get<double>();
      sn.e2 = n.at(1).get<double>();
      sn.mu1 = n.at(2).get<double>();
      sn.mu2 = n.at(3).get<double>();
      sn.perp_norm = n.at(4).get<double>();
      sn.a = n.at(5).get<double>();
      sn.block = n.at(6).get<int>();
      sn.heavy = n.at(7).get<int>();
      rec.neurons.push_back(sn);
    }
    recs.push_back(rec);
  }
  return recs;
}

std::map<std::string, std::string> read_resolved(const fs::path& path) {
  std::ifstream in(path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

const char* block_color(int code) {
  switch (code) {
    case 0: return "#d62728";  // B1+
    case 1: return "#ff9896";  // B1-
    case 2: return "#1f77b4";  // B2+
    case 3: return "#aec7e8";  // B2-
    default: return "#7f7f7f";
  }
}

std::string step_tag(std::int64_t step) {
  std::string s = std::to_string(step);
  while (s.size() < 4) s.insert(s.begin(), '0');
  return s;
}

}  // namespace

void render_plots(const std::string& run_dir) {
  const fs::path dir(run_dir);
  std::vector<std::string> missing;
  if (!fs::exists(dir / "metrics.csv")) missing.push_back("metrics.csv");
  if (!fs::exists(dir / "snapshots.jsonl")) missing.push_back("snapshots.jsonl");
  if (!missing.empty()) {
    std::string msg = "render_plots: missing inputs in " + run_dir + ":";
    for (const auto& m : missing) msg += " " + m;
    throw std::invalid_argument(msg);
  }
  const auto rows = read_metrics_csv(dir / "metrics.csv");
  const auto snaps = read_snapshots(dir / "snapshots.jsonl");
  if (rows.empty()) throw std::invalid_argument("render_plots: metrics.csv has no rows");
  if (snaps.empty()) throw std::invalid_argument("render_plots: snapshots.jsonl has no records");

  const auto kv = read_resolved(dir / "config.resolved");
  const double theta = kv.count("theta") ? std::stod(kv.at("theta")) : 0.01;
  const double d = kv.count("d") ? std::stod(kv.at("d")) : 120.0;
  // Readability rule: keep neurons whose initial signal component clears
  // 2 theta log(d)/sqrt(d).
  const double keep_threshold = 2.0 * theta * std::log(d) / std::sqrt(d);
  const auto& init_snap = snaps.front();
  std::vector<char> keep(init_snap.neurons.size(), 1);
  for (std::size_t i = 0; i < init_snap.neurons.size(); ++i) {
    const auto& n = init_snap.neurons[i];
    const double sig0 = n.a >= 0 ? std::abs(n.mu1) : std::abs(n.mu2);
    keep[i] = sig0 >= keep_threshold;
  }

  for (const auto& snap : snaps) {
    std::vector<svg::Point> pts;
    double extent = 1e-9;
    for (std::size_t i = 0; i < snap.neurons.size(); ++i) {
      if (i < keep.size() && !keep[i]) continue;
      const auto& n = snap.neurons[i];
      pts.push_back({n.e1, n.e2, block_color(n.block)});
      extent = std::max({extent, std::abs(n.e1), std::abs(n.e2)});
    }
    extent *= 1.1;
    const std::string tag = step_tag(snap.step);
    {
      std::ofstream out(dir / ("scatter_step" + tag + ".svg"), std::ios::trunc);
      out << svg::scatter_plane("weight projections, step " + std::to_string(snap.step),
                                pts, extent);
    }
    {
      const int grid = 96;
      const double z_extent = 4.0;
      std::vector<int> cells(grid * grid);
      for (int r = 0; r < grid; ++r)
        for (int c = 0; c < grid; ++c) {
          const double z1 = -z_extent + (c + 0.5) * 2.0 * z_extent / grid;
          const double z2 = z_extent - (r + 0.5) * 2.0 * z_extent / grid;
          double f = 0.0;
          for (const auto& n : snap.neurons) {
            const double u = n.e1 * z1 + n.e2 * z2;
            if (u > 0) f += n.a * u;
          }
          cells[static_cast<std::size_t>(r * grid + c)] = f >= 0 ? 1 : -1;
        }
      std::ofstream out(dir / ("boundary_step" + tag + ".svg"), std::ios::trunc);
      out << svg::sign_heatmap("predicted sign, step " + std::to_string(snap.step), cells,
                               grid, grid, z_extent);
    }
  }

  {
    auto col = [&](auto getter) {
      std::vector<double> v;
      for (const auto& r : rows) v.push_back(getter(r));
      return v;
    };
    std::vector<double> steps = col([](const MetricsRow& r) { return double(r.step); });
    std::vector<svg::Series> series = {
        {"N1+", "#d62728", steps, col([](const MetricsRow& r) { return r.n1_plus; })},
        {"N1-", "#ff9896", steps, col([](const MetricsRow& r) { return r.n1_minus; })},
        {"N2+", "#1f77b4", steps, col([](const MetricsRow& r) { return r.n2_plus; })},
        {"N2-", "#aec7e8", steps, col([](const MetricsRow& r) { return r.n2_minus; })},
        {"R", "#9467bd", steps, col([](const MetricsRow& r) { return r.residual; })},
    };
    std::ofstream out(dir / "blocks.svg", std::ios::trunc);
    out << svg::line_chart("block masses and residual", "step", "mass (log10)", series,
                           true);

    std::vector<svg::Series> loss_series = {
        {"train loss", "#d62728", steps,
         col([](const MetricsRow& r) { return r.train_loss_batch; })},
        {"test loss", "#1f77b4", steps, col([](const MetricsRow& r) { return r.test_loss; })},
        {"test acc", "#2ca02c", steps, col([](const MetricsRow& r) { return r.test_acc; })},
        {"off-boundary acc", "#9467bd", steps,
         col([](const MetricsRow& r) { return r.test_acc_offboundary; })},
    };
    std::ofstream lout(dir / "loss.svg", std::ios::trunc);
    lout << svg::line_chart("loss and accuracy", "step", "value", loss_series, false);
  }
}

// ---------------------------------------------------------------------------
// Sweep and report
// ---------------------------------------------------------------------------

bool detect_plateau(const std::vector<MetricsRow>& rows) {
  if (rows.size() < 5) return false;
  const std::size_t start = rows.size() - std::max<std::size_t>(2, rows.size() / 5);
  const double first = rows[start].test_loss;
  const double last = rows.back().test_loss;
  return std::abs(last - first) < 0.01 * std::max(first, 1e-12);
}

double angular_dispersion(const net::NetworkState& network, double zeta_prime) {
  const stats::HeavyReport rep = stats::signal_heavy_check(network, zeta_prime, 2.0);
  if (rep.heavy_set.empty()) return 1.0;
  std::complex<double> acc(0, 0);
  for (std::size_t idx : rep.heavy_set) {
    const auto& nr = network.neurons[idx];
    const double ang = std::atan2(nr.w[1], nr.w[0]);
    acc += std::exp(std::complex<double>(0, 4.0 * ang));
  }
  return 1.0 - std::abs(acc) / static_cast<double>(rep.heavy_set.size());
}

std::vector<SweepRow> sweep(const config::ExperimentConfig& base,
                            const std::vector<std::vector<std::string>>& patches,
                            const std::string& sweep_dir) {
  if (patches.empty()) throw std::invalid_argument("sweep: need at least one patch");
  std::vector<SweepRow> out;
  std::error_code ec;
  fs::create_directories(sweep_dir, ec);
  std::ofstream summary(fs::path(sweep_dir) / "sweep_summary.csv", std::ios::trunc);
  summary << "name,patch,status,step,test_loss,test_acc,test_acc_offboundary,N_avg,U,R,"
             "heavy_fraction,plateau,angular_dispersion\n"
          << std::flush;

  int idx = 0;
  for (const auto& patch : patches) {
    SweepRow row;
    config::ExperimentConfig cfg = base;
    std::string patch_str;
    for (const auto& p : patch) patch_str += (patch_str.empty() ? "" : ";") + p;
    row.patch = patch_str;
    try {
      config::apply_overrides(cfg, patch);
      if (cfg.name == base.name) cfg.name = base.name + "_p" + std::to_string(idx);
      cfg.output_dir = (fs::path(sweep_dir) / cfg.name).string();
      row.name = cfg.name;
      RunResult r = run_experiment(cfg, true);
      row.ok = true;
      row.final_row = r.metrics.back();
      row.plateau = detect_plateau(r.metrics);
      row.angular_dispersion = angular_dispersion(r.final_net, cfg.heavy_zeta_prime);
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
      if (row.name.empty()) row.name = "patch_" + std::to_string(idx);
    }
    const auto& fr = row.final_row;
    summary << row.name << ",\"" << row.patch << "\"," << (row.ok ? "ok" : "error") << ','
            << fr.step << ',' << fmt_full(fr.test_loss) << ',' << fmt_full(fr.test_acc)
            << ',' << fmt_full(fr.test_acc_offboundary) << ',' << fmt_full(fr.n_avg) << ','
            << fmt_full(fr.unbalance) << ',' << fmt_full(fr.residual) << ','
            << fmt_full(fr.heavy_fraction) << ',' << (row.plateau ? 1 : 0) << ','
            << fmt_full(row.angular_dispersion) << '\n'
            << std::flush;
    out.push_back(std::move(row));
    ++idx;
  }
  return out;
}

std::string report_text(const std::string& run_dir) {
  const fs::path dir(run_dir);
  if (!fs::exists(dir / "metrics.csv"))
    throw std::invalid_argument("report: no metrics.csv in " + run_dir);
  const auto rows = read_metrics_csv(dir / "metrics.csv");
  if (rows.empty()) throw std::invalid_argument("report: metrics.csv has no rows");

  const bool complete = fs::exists(dir / "run_summary.json");
  std::ostringstream os;
  os << "run directory: " << run_dir << (complete ? "" : "  [partial]") << "\n";
  const auto& last = rows.back();
  os << "rows: " << rows.size() << ", last step: " << last.step << "\n";
  os << "final: test_loss=" << last.test_loss << " test_acc=" << last.test_acc
     << " off-boundary accuracy (eps from config): " << last.test_acc_offboundary << "\n";
  os << "final block masses: N1+=" << last.n1_plus << " N1-=" << last.n1_minus
     << " N2+=" << last.n2_plus << " N2-=" << last.n2_minus << " (N_avg=" << last.n_avg
     << ")\n";
  double max_u = 0, max_u_100 = 0;
  for (const auto& r : rows) {
    max_u = std::max(max_u, r.unbalance);
    if (r.step >= 100) max_u_100 = std::max(max_u_100, r.unbalance);
  }
  os << "unbalance: final=" << last.unbalance << " max=" << max_u
     << " max(step>=100)=" << max_u_100 << "\n";
  os << "residual mass R: " << last.residual << "\n";
  os << "heavy fraction: " << last.heavy_fraction << "\n";

  if (fs::exists(dir / "run_summary.json")) {
    std::ifstream in(dir / "run_summary.json");
    json j = json::parse(in, nullptr, false);
    if (!j.is_discarded()) {
      os << "stop step (mass target " << j.value("stop_mass_target", 0.0)
         << "): " << j.value("stop_step", -1) << "\n";
      os << "max gradient-identity gap: " << j.value("max_gradient_identity_gap", 0.0)
         << "\n";
      os << "balance violations: " << j.value("balance_violations", 0) << "\n";
      os << "samples: train=" << j.value("train_samples", 0)
         << " eval=" << j.value("eval_samples", 0) << "\n";
    }
  }

  if (fs::exists(dir / "growth_audit.csv")) {
    std::ifstream in(dir / "growth_audit.csv");
    std::string line;
    std::getline(in, line);
    std::int64_t total = 0, inside = 0;
    const auto kv = read_resolved(dir / "config.resolved");
    const double eta = kv.count("eta") ? std::stod(kv.at("eta")) : 0.05;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      std::string c;
      std::vector<double> v;
      while (std::getline(ls, c, ',')) v.push_back(std::stod(c));
      if (v.size() != 4) continue;
      if (v[1] < 0.5 || v[1] > 2.0) continue;
      ++total;
      const double lo = 1.0 + 1.6 * eta * v[3], hi = 1.0 + 2.4 * eta * v[3];
      if (v[2] >= lo && v[2] <= hi) ++inside;
    }
    if (total > 0)
      os << "growth law: " << inside << "/" << total
         << " in-window steps inside [1+1.6 eta g, 1+2.4 eta g]\n";
    else
      os << "growth law: window not reached\n";
  }

  os << "plots: ";
  bool any = false;
  for (const auto& name : {"blocks.svg", "loss.svg"}) {
    if (fs::exists(dir / name)) {
      os << (any ? ", " : "") << name;
      any = true;
    }
  }
  os << (any ? "" : "(not rendered; run the plot command)") << "\n";
  return os.str();
}

}  // namespace blockdyn::harness
