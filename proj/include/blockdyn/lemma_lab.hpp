#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "blockdyn/rng.hpp"

namespace blockdyn::lab {

enum class Verdict { kPass, kFail, kInconclusive };

std::string to_string(Verdict v);

struct LemmaCheck {
  std::string lemma_id;
  std::string inputs;          // parameter record, "t=1 a=0.5 ..."
  double predicted_lo = 0.0;   // target interval before statistical widening
  double predicted_hi = 0.0;
  double measured = 0.0;
  double std_err = 0.0;
  Verdict verdict = Verdict::kInconclusive;
  std::string tolerance_spec;
  std::string note;
};

// Pass iff measured lies in [lo, hi] widened by `stat_margin`; inconclusive
// when the noise alone spans more than half the interval.
Verdict interval_verdict(double measured, double lo, double hi, double stat_margin,
                         double std_err);

// ---- 1-D Gaussian integral checks (quadrature oracle vs stated bounds) ----

LemmaCheck check_small_ball(double eps);
LemmaCheck check_mills_ratio(double t);
LemmaCheck check_folded_laplace(double t);
LemmaCheck check_squared_gauss(double t, std::uint64_t seed = 0);

// ---- Correlation-loss population gradients ----

struct PopGradEstimate {
  std::vector<double> grad_w;  // full d-vector
  double grad_a = 0.0;
  double grad_a_se = 0.0;
  // Projections of grad_w onto the (non-unit) decomposition vectors.
  double proj_sig = 0.0, proj_sig_se = 0.0;
  double proj_opp = 0.0, proj_opp_se = 0.0;
  double proj_perp = 0.0, proj_perp_se = 0.0;
  // First two coordinates with their own standard errors.
  double comp_e1 = 0.0, comp_e1_se = 0.0;
  double comp_e2 = 0.0, comp_e2_se = 0.0;
  std::uint64_t n_samples = 0;
};

// Monte Carlo estimate of the correlation-loss gradients
//   grad_w = -a E[ y relu'(w.x) x ],  grad_a = -E[ y relu(w.x) ]
// over x ~ N(0, I_d) with XOR labels. `paired` evaluates each noise draw at
// the four sign combinations (+-z, +-xi), which cancels the dominant noise
// terms of the projections exactly; n_samples counts total evaluations.
PopGradEstimate mc_population_gradient_L0(std::span<const double> w, double a,
                                          std::uint64_t n_samples, rng::Stream stream,
                                          bool paired = true);

struct Phase1aResult {
  LemmaCheck sig;        // signal reinforcement magnitude
  LemmaCheck opp;        // damping term, opposite sign
  LemmaCheck perp_sign;  // sign rule and magnitude bound of the perp drift
  LemmaCheck combined;
};

// Regime gate: ||w_{1:2}|| <= 0.05 ||w_perp|| (leading term dominates the
// cubic remainder by >= 10x); otherwise all verdicts are inconclusive.
Phase1aResult check_phase1a_gradient(std::span<const double> w, double a,
                                     std::uint64_t n_samples, rng::Stream stream);

struct Phase1bResult {
  LemmaCheck sig_envelope;
  LemmaCheck opp_bound;
  LemmaCheck combined;
};

// Phase-Ib two-sided envelope; c_b / c_b_prime are the frozen calibrated
// constants. Regime gate: ||w_opp|| <= 0.1 ||w_sig||. At the regime boundary
// (||w_sig|| within 5% of ||w_perp||) both envelopes are evaluated and the
// union is required.
Phase1bResult check_phase1b_gradient(std::span<const double> w, double a,
                                     std::uint64_t n_samples, rng::Stream stream,
                                     double c_b = 0.12, double c_b_prime = 0.12);

// Exact common-random-number equivariance of the correlation-loss gradient
// under the quarter-turn that exchanges the two signal directions.
LemmaCheck check_block_rotation(std::span<const double> w, double a,
                                std::uint64_t n_samples, rng::Stream stream);

// ---- Suites (used by the verify command and the acceptance runner) ----

struct SuiteOptions {
  std::uint64_t seed = 7;
  std::uint64_t mc_samples = 1'000'000;   // per gradient estimate
  std::uint64_t margin_samples = 10'000'000;  // per margin estimate
  int phase1a_count = 50;
  int phase1b_count = 24;
  int rotation_count = 20;
  int alignment_count = 20;
  int non_heavy_count = 100;
};

std::vector<LemmaCheck> suite_gaussian_lemmas(const SuiteOptions& opt);
std::vector<LemmaCheck> suite_phase1a(const SuiteOptions& opt);
std::vector<LemmaCheck> suite_phase1b(const SuiteOptions& opt);
std::vector<LemmaCheck> suite_block_rotation(const SuiteOptions& opt);
std::vector<LemmaCheck> suite_margin(const SuiteOptions& opt);
std::vector<LemmaCheck> suite_oracle_alignment(const SuiteOptions& opt);

// name in {gaussian-lemmas, phase1a, phase1b, block-rotation, margin,
// oracle-alignment, all}
std::vector<LemmaCheck> run_suite(const std::string& name, const SuiteOptions& opt);
std::vector<std::string> suite_names();

// Deterministic neuron generators shared by suites and tests.
struct TestNeuron {
  std::vector<double> w;
  double a;
};
TestNeuron random_phase1a_neuron(rng::Stream s);
TestNeuron random_phase1b_neuron(rng::Stream s, double lambda);

}  // namespace blockdyn::lab
