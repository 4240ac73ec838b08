#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "blockdyn/network.hpp"
#include "blockdyn/rng.hpp"

namespace blockdyn::oracle {

// Idealized four-direction network with perfectly balanced block mass N:
// f(z) = N * (|mu1.z| - |mu2.z|).
double oracle_forward(double z1, double z2, double mass);

// XOR label of a 2-D point, sgn(|mu1.z| - |mu2.z|); 0 on the boundary.
int label2d(double z1, double z2);

// Loss derivative of the oracle network at z (uses the XOR label of z).
double oracle_loss_derivative(double z1, double z2, double mass);

enum class MarginKind { kGMu, kGRho };

struct MarginEstimate {
  double value = 0.0;
  double std_err = 0.0;
  std::uint64_t n_samples = 0;
  MarginKind kind = MarginKind::kGMu;
};

// Average margin g_mu = E_z[ y(z) |l'(z)| relu(mu1.z) ], z ~ N(0, I2).
// The pi/2-rotation symmetry of the oracle makes one estimate serve all four
// mu directions. `direction` (0 -> mu1, 1 -> mu2) exists for symmetry tests.
MarginEstimate estimate_g_mu(double mass, std::uint64_t n_samples, rng::Stream stream,
                             int direction = 0);

// g_rho = E_z |l'(z)|.
MarginEstimate estimate_g_rho(double mass, std::uint64_t n_samples, rng::Stream stream);

// Same with common random numbers for paired monotonicity tests.
double g_rho_paired_difference(double mass_lo, double mass_hi, std::uint64_t n_samples,
                               rng::Stream stream);

// Quadrature route for the same quantities (independent of the MC path).
double g_mu_quadrature(double mass, int order = 96);
double g_rho_quadrature(double mass, int order = 96);

enum class LossMode { kOracle, kRealNetwork };

struct CleanGradient {
  std::vector<double> grad_w;
  double grad_a = 0.0;
  double grad_a_std_err = 0.0;
  // Standard error of the projection of grad_w onto a caller-chosen unit
  // direction, accumulated when `proj_dir` is supplied.
  double proj_value = 0.0;
  double proj_std_err = 0.0;
};

// Clean gradient: the loss derivative is evaluated at the 2-D projection z
// while the activation uses the full input x ~ N(0, I_d).
//   grad_w = a E[ l'(z) relu'(w.x) x ],  grad_a = E[ l'(z) relu(w.x) ].
// mode kOracle takes l' from the oracle model with the given mass; mode
// kRealNetwork evaluates the supplied network at the embedded projection.
CleanGradient clean_gradient(std::span<const double> w, double a, LossMode mode,
                             double mass, const net::NetworkState* network,
                             std::uint64_t n_samples, rng::Stream stream,
                             std::span<const double> proj_dir = {});

// One-step idealized mass growth, (1 + 2 eta g_mu) N.
double predicted_block_growth(double mass, double g_mu, double eta);

}  // namespace blockdyn::oracle
