#include "blockdyn/blockstats.hpp"

#include <cmath>
#include <stdexcept>

#include "blockdyn/distributions.hpp"
#include "blockdyn/vecops.hpp"

namespace blockdyn::stats {

Decomposition decompose(std::span<const double> w, double a) {
  if (w.size() < 2) throw std::invalid_argument("decompose: dimension must be >= 2");
  const double m1 = w[0] * dist::kMu1[0] + w[1] * dist::kMu1[1];
  const double m2 = w[0] * dist::kMu2[0] + w[1] * dist::kMu2[1];
  Decomposition dec;
  const double sig = (a >= 0) ? m1 : m2;
  const double opp = (a >= 0) ? m2 : m1;
  const auto& mu_sig = (a >= 0) ? dist::kMu1 : dist::kMu2;
  const auto& mu_opp = (a >= 0) ? dist::kMu2 : dist::kMu1;
  dec.w_sig = {sig * mu_sig[0], sig * mu_sig[1]};
  dec.w_opp = {opp * mu_opp[0], opp * mu_opp[1]};
  dec.w_perp.assign(w.begin(), w.end());
  dec.w_perp[0] = 0.0;
  dec.w_perp[1] = 0.0;
  dec.sig_norm = std::abs(sig);
  dec.opp_norm = std::abs(opp);
  dec.perp_norm = vec::perp_norm(w);
  dec.sig_coord = sig;
  return dec;
}

BlockStats block_masses(const net::NetworkState& net) {
  double sum[4] = {0, 0, 0, 0};
  std::size_t count[4] = {0, 0, 0, 0};
  BlockStats out;
  out.step = net.step;
  for (const auto& nr : net.neurons) {
    const Decomposition dec = decompose(nr.w, nr.a);
    const double aw = std::abs(nr.a);
    out.residual += aw * dec.perp_norm;
    out.total_aw_norm += aw * vec::norm2(nr.w);
    if (nr.block == net::BlockLabel::kNone) continue;
    const int b = net::block_code(nr.block);
    sum[b] += aw * dec.sig_norm;
    count[b] += 1;
  }
  for (int b = 0; b < 4; ++b)
    if (count[b] == 0) throw std::runtime_error("degenerate initialization: empty block");
  out.n1_plus = sum[0] / static_cast<double>(count[0]);
  out.n1_minus = sum[1] / static_cast<double>(count[1]);
  out.n2_plus = sum[2] / static_cast<double>(count[2]);
  out.n2_minus = sum[3] / static_cast<double>(count[3]);
  const double n[4] = {out.n1_plus, out.n1_minus, out.n2_plus, out.n2_minus};
  out.n_avg = (n[0] + n[1] + n[2] + n[3]) / 4.0;
  double u = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      u = std::max(u, std::abs(n[i] / n[j] - 1.0));
    }
  out.unbalance = u;
  return out;
}

HeavyReport signal_heavy_check(const net::NetworkState& net, double zeta_prime,
                               double h_const) {
  HeavyReport rep;
  rep.zeta_prime = zeta_prime;
  rep.h_const = h_const;
  const std::size_t m = net.neurons.size();
  double light_sq_sum = 0.0;
  double w_sq_sum = 0.0, a_sq_sum = 0.0;
  bool a_le_w = true;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& nr = net.neurons[i];
    const Decomposition dec = decompose(nr.w, nr.a);
    const double wnorm_sq = vec::dot(nr.w, nr.w);
    w_sq_sum += wnorm_sq;
    a_sq_sum += nr.a * nr.a;
    if (std::abs(nr.a) > std::sqrt(wnorm_sq) * (1.0 + 1e-12)) a_le_w = false;
    if (dec.perp_norm + dec.opp_norm <= zeta_prime * dec.sig_norm)
      rep.heavy_set.push_back(i);
    else
      light_sq_sum += wnorm_sq;
  }
  rep.cond1_ok = !rep.heavy_set.empty();
  rep.heavy_fraction = static_cast<double>(rep.heavy_set.size()) / static_cast<double>(m);
  const double n_avg = block_masses(net).n_avg;
  rep.cond2_ok = light_sq_sum / static_cast<double>(m) <= zeta_prime * n_avg;
  rep.cond3_ok = (w_sq_sum / static_cast<double>(m) <=
                  a_sq_sum / static_cast<double>(m) + zeta_prime * h_const) &&
                 a_le_w;
  return rep;
}

double EnvelopeParams::zeta() const { return std::pow(std::log(static_cast<double>(d)), -c_zeta); }

long long EnvelopeParams::t_switch_a() const {
  const double logd = std::log(static_cast<double>(d));
  const double z = zeta();
  const double num = logd + 2.0 * std::log(z) - std::log(logd);
  const double den = std::log1p(2.0 * eta * kTau * (1.0 + z));
  return static_cast<long long>(std::floor(num / den));
}

long long EnvelopeParams::t_switch_b() const {
  const long long ta = t_switch_a();
  const double z = zeta();
  const double s_ta = compute_envelopes(*this, ta).s;
  const double target_sq = theta * theta / (z * z);
  const double num = std::log(target_sq / (s_ta * s_ta));
  const double den = std::log1p(c_b * eta);
  return ta + static_cast<long long>(std::floor(num / den));
}

Envelopes compute_envelopes(const EnvelopeParams& p, long long t) {
  const double logd = std::log(static_cast<double>(p.d));
  const double z = p.zeta();
  const long long ta = p.t_switch_a();
  const double b0_sq = p.c1 * logd * p.theta * p.theta / p.d;
  const double s0_sq = p.theta * p.theta / p.d;
  const double rb = 1.0 + 2.0 * p.eta * kTau * (1.0 + z);
  const double rs = 1.0 + 2.0 * p.eta * kTau * (1.0 - z);

  Envelopes e;
  double b_sq, s_sq;
  if (t <= ta) {
    b_sq = b0_sq * std::pow(rb, static_cast<double>(t));
    s_sq = s0_sq * std::pow(rs, static_cast<double>(t));
  } else {
    const double b_ta_sq = b0_sq * std::pow(rb, static_cast<double>(ta));
    const double s_ta_sq = s0_sq * std::pow(rs, static_cast<double>(ta));
    b_sq = b_ta_sq * std::pow(1.0 + 4.0 * p.eta, static_cast<double>(t - ta));
    s_sq = s_ta_sq * std::pow(1.0 + p.c_b * p.eta, static_cast<double>(t - ta));
  }
  const double q_sq = b0_sq * std::pow(1.0 + 50.0 * p.eta / logd, static_cast<double>(t));
  e.b = std::sqrt(b_sq);
  e.s = std::sqrt(s_sq);
  e.q = std::sqrt(q_sq);
  return e;
}

std::string to_string(NeuronClass c) {
  switch (c) {
    case NeuronClass::kControlled: return "controlled";
    case NeuronClass::kWeaklyControlled: return "weakly_controlled";
    case NeuronClass::kStrongAndControlled: return "strong_and_controlled";
    case NeuronClass::kStrongAndWeak: return "strong_and_weak";
    case NeuronClass::kUncontrolled: return "uncontrolled";
  }
  return "?";
}

NeuronClass classify_neuron(const net::NeuronState& neuron, const EnvelopeParams& p,
                            long long t) {
  if (neuron.w0.size() != neuron.w.size())
    throw std::invalid_argument("classify_neuron: missing initial snapshot");
  const double logd = std::log(static_cast<double>(p.d));
  const double sqrt_d = std::sqrt(static_cast<double>(p.d));
  const double z = p.zeta();
  const long long ta = p.t_switch_a();
  const Decomposition now = decompose(neuron.w, neuron.a);
  const Decomposition init = decompose(neuron.w0, neuron.a0);
  const double w_norm = vec::norm2(neuron.w);
  const double a_abs = std::abs(neuron.a);
  const double td = static_cast<double>(t);

  bool controlled = true;
  controlled &= now.sig_norm <= std::max(init.sig_norm, p.theta / (logd * sqrt_d)) *
                                    std::pow(1.0 + p.eta * (kTau + z), td);
  controlled &= now.opp_norm <= std::max(init.opp_norm, p.theta / (logd * sqrt_d)) *
                                    std::pow(1.0 + p.eta * p.theta, td);
  controlled &= std::abs(a_abs - p.theta) <= p.theta * td * p.eta * z + 1e-15;
  controlled &= a_abs <= w_norm * (1.0 + 1e-12);
  {
    double drift_sq = 0.0;
    for (std::size_t i = 2; i < neuron.w.size(); ++i) {
      const double dv = neuron.w[i] - neuron.w0[i];
      drift_sq += dv * dv;
    }
    controlled &= std::sqrt(drift_sq) <= p.theta * std::pow(z, 0.25) * p.eta * td + 1e-15;
  }
  {
    double winf = 0.0;
    for (std::size_t i = 2; i < neuron.w.size(); ++i)
      winf = std::max(winf, std::abs(neuron.w[i]));
    controlled &= winf <= (p.theta * logd / sqrt_d) * std::pow(1.0 + p.eta * p.theta, td);
  }

  const Envelopes env = compute_envelopes(p, t);
  bool weak = t >= ta;
  if (weak) {
    weak &= p.theta * z <= now.sig_norm && now.sig_norm <= env.b;
    weak &= env.b <= p.theta / z * logd;
    weak &= now.opp_norm <= 3.0 * p.theta * env.b;
    const double slack = p.theta * p.theta *
                         (std::sqrt(z) + p.weak_c * p.eta * p.eta *
                                             static_cast<double>(t - ta) *
                                             p.weak_zeta_prime * p.weak_zeta_prime);
    weak &= w_norm * w_norm >= a_abs * a_abs &&
            a_abs * a_abs >= w_norm * w_norm - slack;
    weak &= now.perp_norm <= 3.0 * p.theta;
  }

  const bool strong = (controlled || weak) &&
                      (now.sig_coord * init.sig_coord > 0.0) &&
                      (now.sig_norm * now.sig_norm >= env.s * env.s);

  if (strong) return controlled ? NeuronClass::kStrongAndControlled : NeuronClass::kStrongAndWeak;
  if (controlled) return NeuronClass::kControlled;
  if (weak) return NeuronClass::kWeaklyControlled;
  return NeuronClass::kUncontrolled;
}

}  // namespace blockdyn::stats
