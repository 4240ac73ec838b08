#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "blockdyn/distributions.hpp"
#include "blockdyn/rng.hpp"

namespace blockdyn::net {

enum class BlockLabel { kB1Plus, kB1Minus, kB2Plus, kB2Minus, kNone };

std::string to_string(BlockLabel b);
int block_code(BlockLabel b);  // stable numeric code for file output

struct NeuronState {
  std::vector<double> w;   // first-layer weight, length d
  double a = 0.0;          // second-layer weight
  BlockLabel block = BlockLabel::kNone;  // fixed at initialization
  std::vector<double> w0;  // initial weight (kept for history-dependent checks)
  double a0 = 0.0;
};

struct Hyper {
  int d = 2;
  int m = 4;
  double theta = 0.01;  // init scale
  double eta = 0.05;    // learning rate
  int batch = 64;       // V
};

struct NetworkState {
  std::vector<NeuronState> neurons;
  std::uint64_t step = 0;
  Hyper hyper;
};

struct GradientSet {
  std::vector<std::vector<double>> grad_w;  // per neuron, length d
  std::vector<double> grad_a;
};

// First layer uniform on the radius-theta sphere, second layer theta times a
// Rademacher sign; block labels assigned from sign(a) and the mu correlation.
NetworkState init_network(const Hyper& hyper, rng::Stream init_stream);

// Mean over neurons of a * relu(w.x).
double forward(const NetworkState& net, std::span<const double> x);

// Network value at a 2-D point embedded with zero perp coordinates.
double forward2d(const NetworkState& net, double z1, double z2);

// 2 log(1 + exp(-y f)), overflow-safe.
double logistic_loss(double f, int y);

// d/df of logistic_loss: -2 y exp(-y f) / (1 + exp(-y f)).
double loss_derivative(double f, int y);

// Per-neuron batch gradients. The chain rule through f = (1/m) sum would add
// a 1/m factor; the update rule here deliberately omits it, so eta is the
// per-neuron step size. relu'(0) = 0.
GradientSet batch_gradients(const NetworkState& net,
                            std::span<const dist::LabeledSample> batch);

// Simultaneous update of all neurons from one GradientSet; bumps step.
void sgd_step(NetworkState& net, const GradientSet& grads, double eta);

// Max over neurons of |w.grad_w - a*grad_a| (exact identity up to rounding).
double gradient_identity_gap(const NetworkState& net, const GradientSet& grads);

}  // namespace blockdyn::net
