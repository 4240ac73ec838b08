#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "blockdyn/rng.hpp"

namespace blockdyn::dist {

// XOR directions in the (e1, e2) plane.
inline constexpr std::array<double, 2> kMu1 = {1.0 / std::numbers::sqrt2,
                                               -1.0 / std::numbers::sqrt2};
inline constexpr std::array<double, 2> kMu2 = {1.0 / std::numbers::sqrt2,
                                               1.0 / std::numbers::sqrt2};

enum class InputKind {
  kIsotropicGaussian,
  kAnisotropicGaussian,
  kUniformCube,
  kXorGaussianMixture,
};

enum class LabelKind { kXor, kSinusoid };

InputKind input_kind_from_string(const std::string& s);
std::string to_string(InputKind k);
LabelKind label_kind_from_string(const std::string& s);
std::string to_string(LabelKind k);

struct InputSpec {
  InputKind kind = InputKind::kIsotropicGaussian;
  int dimension = 2;
  // Anisotropic: variances along mu1 and mu2 (identity elsewhere).
  double aniso_lambda1 = 5.0;
  double aniso_lambda2 = 1.0;
  // Mixture: cluster centers at mean_norm * (+-mu1, +-mu2); <= 0 means sqrt(d).
  double mixture_mean_norm = 0.0;
  double mixture_cluster_std = 1.0;

  void validate() const;  // throws std::invalid_argument on bad config
  double resolved_mean_norm() const;
};

struct LabelSpec {
  LabelKind kind = LabelKind::kXor;
  double noise_rate = 0.0;

  void validate() const;
};

struct LabeledSample {
  std::vector<double> x;
  int y = 0;                      // +1 or -1
  std::array<double, 2> z{};      // (x1, x2), cached
};

// Clean label of the 2-D projection; 0 only on the zero-measure boundary.
int clean_label(LabelKind kind, double z1, double z2);

// Draws one input vector into x (size d) using the given stream.
void sample_input(const InputSpec& spec, rng::Stream& s, std::vector<double>& x);

// One labeled sample addressed by index: inputs come from stream.child(index),
// the label-noise flip from noise_stream.child(index), so toggling noise never
// shifts the input draws and generation parallelizes by index.
LabeledSample sample_at(const InputSpec& spec, const LabelSpec& label,
                        const rng::Stream& input_stream,
                        const rng::Stream& noise_stream, std::uint64_t index);

std::vector<LabeledSample> sample_batch(const InputSpec& spec, const LabelSpec& label,
                                        std::uint64_t n, const rng::Stream& input_stream,
                                        const rng::Stream& noise_stream);

// Distance of z from the XOR decision boundary: min(|z1|, |z2|), which equals
// r (|sin t| ^ |cos t|) in polar form.
double boundary_margin(double z1, double z2);

bool in_boundary_region(double z1, double z2, double eps);

}  // namespace blockdyn::dist
