#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "blockdyn/network.hpp"

namespace blockdyn::stats {

// Split of a weight vector into the signal direction (mu1 if a >= 0, mu2
// otherwise), the other in-plane direction, and the out-of-plane rest.
struct Decomposition {
  std::array<double, 2> w_sig{};   // in-plane, along the signal direction
  std::array<double, 2> w_opp{};   // in-plane, along the other direction
  std::vector<double> w_perp;      // length d, zero first two coordinates
  double sig_norm = 0.0;
  double opp_norm = 0.0;
  double perp_norm = 0.0;
  double sig_coord = 0.0;  // signed coordinate mu_sig . w
};

Decomposition decompose(std::span<const double> w, double a);

struct BlockStats {
  double n1_plus = 0, n1_minus = 0, n2_plus = 0, n2_minus = 0;
  double n_avg = 0;
  double unbalance = 0;        // max over ordered block pairs of |Ni/Nj - 1|
  double residual = 0;         // sum over all neurons of |a| * ||w_perp||
  double total_aw_norm = 0;    // sum over all neurons of |a| * ||w||
  // Coefficient of the single-mass idealized network matching f: each block
  // enters f with weight |block|/m, so this is sum |a| ||w_sig|| / (4m); it
  // equals n_avg / 4 when the blocks are balanced and equally sized.
  double oracle_mass = 0;
  double heavy_fraction = 0;   // filled by the caller when heavy params known
  std::uint64_t step = 0;
};

// Block masses are per-block means of |a| ||w_sig|| over the init-assigned
// blocks; the residual is a sum over all neurons. Throws if a block is empty.
BlockStats block_masses(const net::NetworkState& net);

struct HeavyReport {
  std::vector<std::size_t> heavy_set;
  bool cond1_ok = false;  // heavy_set is nonempty by the defining inequality
  bool cond2_ok = false;  // non-heavy mean squared norm <= zeta' * N_avg
  bool cond3_ok = false;  // layer balance
  double heavy_fraction = 0.0;
  double zeta_prime = 0.0;
  double h_const = 0.0;
};

HeavyReport signal_heavy_check(const net::NetworkState& net, double zeta_prime,
                               double h_const);

// Growth-envelope parameters. tau is the initial population growth rate of
// the signal component, sqrt(2) / pi^(3/2).
inline constexpr double kTau = 0.25397454382;

struct EnvelopeParams {
  double theta = 0.01;
  double eta = 0.05;
  int d = 120;
  double c_zeta = 3.0;   // zeta = (log d)^(-c_zeta)
  double c1 = 4.0;       // prefactor of B and Q
  double c_b = 0.12;     // post-switch lower growth rate constant
  // Free constants of the weakly-controlled predicate.
  double weak_c = 1.0;
  double weak_zeta_prime = 0.1;

  double zeta() const;
  long long t_switch_a() const;  // T_A
  long long t_switch_b() const;  // T_B
};

struct Envelopes {
  double b = 0, s = 0, q = 0;
};

Envelopes compute_envelopes(const EnvelopeParams& p, long long t);

enum class NeuronClass {
  kControlled,
  kWeaklyControlled,
  kStrongAndControlled,
  kStrongAndWeak,
  kUncontrolled,
};

std::string to_string(NeuronClass c);

// Diagnostic classification against the envelopes; needs the initial state
// carried inside the neuron.
NeuronClass classify_neuron(const net::NeuronState& neuron, const EnvelopeParams& p,
                            long long t);

}  // namespace blockdyn::stats
