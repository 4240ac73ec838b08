#include "blockdyn/network.hpp"

#include <cmath>
#include <stdexcept>

#include "blockdyn/parallel.hpp"
#include "blockdyn/vecops.hpp"

namespace blockdyn::net {

std::string to_string(BlockLabel b) {
  switch (b) {
    case BlockLabel::kB1Plus: return "B1+";
    case BlockLabel::kB1Minus: return "B1-";
    case BlockLabel::kB2Plus: return "B2+";
    case BlockLabel::kB2Minus: return "B2-";
    case BlockLabel::kNone: return "none";
  }
  return "?";
}

int block_code(BlockLabel b) { return static_cast<int>(b); }

NetworkState init_network(const Hyper& hyper, rng::Stream init_stream) {
  if (hyper.theta <= 0) throw std::invalid_argument("theta must be positive");
  if (hyper.m < 4) throw std::invalid_argument("m must be >= 4");
  if (hyper.d < 2) throw std::invalid_argument("d must be >= 2");

  NetworkState net;
  net.hyper = hyper;
  net.neurons.resize(static_cast<std::size_t>(hyper.m));
  for (int i = 0; i < hyper.m; ++i) {
    rng::Stream s = init_stream.child(static_cast<std::uint64_t>(i));
    NeuronState& nr = net.neurons[static_cast<std::size_t>(i)];
    nr.w.resize(static_cast<std::size_t>(hyper.d));
    double norm = 0.0;
    do {
      for (auto& v : nr.w) v = s.normal();
      norm = vec::norm2(nr.w);
    } while (norm == 0.0);
    vec::scale(hyper.theta / norm, nr.w);
    nr.a = hyper.theta * s.rademacher();

    const double m1 = nr.w[0] * dist::kMu1[0] + nr.w[1] * dist::kMu1[1];
    const double m2 = nr.w[0] * dist::kMu2[0] + nr.w[1] * dist::kMu2[1];
    if (nr.a > 0) {
      nr.block = m1 > 0   ? BlockLabel::kB1Plus
                 : m1 < 0 ? BlockLabel::kB1Minus
                          : BlockLabel::kNone;
    } else if (nr.a < 0) {
      nr.block = m2 > 0   ? BlockLabel::kB2Plus
                 : m2 < 0 ? BlockLabel::kB2Minus
                          : BlockLabel::kNone;
    } else {
      nr.block = BlockLabel::kNone;
    }
    nr.w0 = nr.w;
    nr.a0 = nr.a;
  }
  return net;
}

double forward(const NetworkState& net, std::span<const double> x) {
  double s = 0.0;
  for (const auto& nr : net.neurons) {
    const double u = vec::dot(nr.w, x);
    if (u > 0) s += nr.a * u;
  }
  return s / static_cast<double>(net.neurons.size());
}

double forward2d(const NetworkState& net, double z1, double z2) {
  double s = 0.0;
  for (const auto& nr : net.neurons) {
    const double u = nr.w[0] * z1 + nr.w[1] * z2;
    if (u > 0) s += nr.a * u;
  }
  return s / static_cast<double>(net.neurons.size());
}

namespace {
double softplus(double t) {
  return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}
}  // namespace

double logistic_loss(double f, int y) { return 2.0 * softplus(-y * f); }

double loss_derivative(double f, int y) {
  const double yf = y * f;
  double sig;  // logistic(-yf) = exp(-yf) / (1 + exp(-yf))
  if (yf >= 0) {
    const double e = std::exp(-yf);
    sig = e / (1.0 + e);
  } else {
    sig = 1.0 / (1.0 + std::exp(yf));
  }
  return -2.0 * y * sig;
}

GradientSet batch_gradients(const NetworkState& net,
                            std::span<const dist::LabeledSample> batch) {
  if (batch.empty()) throw std::invalid_argument("batch_gradients: empty batch");
  const std::size_t m = net.neurons.size();
  const std::size_t d = net.neurons.front().w.size();
  for (const auto& s : batch)
    if (s.x.size() != d) throw std::invalid_argument("batch_gradients: dimension mismatch");

  const std::size_t V = batch.size();
  // Pass 1: full-network loss derivative per sample.
  std::vector<double> lprime(V);
  // Pre-activations, kept so pass 2 reuses them: act[j*m + i] = w_i . x_j.
  std::vector<double> act(V * m);
  for (std::size_t j = 0; j < V; ++j) {
    double f = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double u = vec::dot(net.neurons[i].w, batch[j].x);
      act[j * m + i] = u;
      if (u > 0) f += net.neurons[i].a * u;
    }
    f /= static_cast<double>(m);
    lprime[j] = loss_derivative(f, batch[j].y);
  }

  GradientSet g;
  g.grad_w.assign(m, std::vector<double>(d, 0.0));
  g.grad_a.assign(m, 0.0);
  const double inv_v = 1.0 / static_cast<double>(V);

  // Pass 2: per-neuron accumulation, parallel over neurons. Each neuron sums
  // over samples in index order, so results do not depend on thread count.
  par::for_items(m, [&](std::uint64_t i) {
    auto& gw = g.grad_w[i];
    double ga = 0.0;
    const double a = net.neurons[i].a;
    for (std::size_t j = 0; j < V; ++j) {
      const double u = act[j * m + i];
      if (u <= 0) continue;  // relu'(0) = 0
      const double c = lprime[j];
      vec::axpy(c * a, batch[j].x, gw);
      ga += c * u;
    }
    vec::scale(inv_v, gw);
    g.grad_a[i] = ga * inv_v;
  });
  return g;
}

void sgd_step(NetworkState& net, const GradientSet& grads, double eta) {
  if (eta <= 0) throw std::invalid_argument("sgd_step: eta must be positive");
  for (std::size_t i = 0; i < net.neurons.size(); ++i) {
    vec::axpy(-eta, grads.grad_w[i], net.neurons[i].w);
    net.neurons[i].a -= eta * grads.grad_a[i];
  }
  ++net.step;
}

double gradient_identity_gap(const NetworkState& net, const GradientSet& grads) {
  double worst = 0.0;
  for (std::size_t i = 0; i < net.neurons.size(); ++i) {
    const double lhs = vec::dot(net.neurons[i].w, grads.grad_w[i]);
    const double rhs = net.neurons[i].a * grads.grad_a[i];
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace blockdyn::net
