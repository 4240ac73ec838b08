#include "blockdyn/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blockdyn::dist {

InputKind input_kind_from_string(const std::string& s) {
  if (s == "isotropic_gaussian") return InputKind::kIsotropicGaussian;
  if (s == "anisotropic_gaussian") return InputKind::kAnisotropicGaussian;
  if (s == "uniform_cube") return InputKind::kUniformCube;
  if (s == "xor_gaussian_mixture") return InputKind::kXorGaussianMixture;
  throw std::invalid_argument("unknown input kind: " + s);
}

std::string to_string(InputKind k) {
  switch (k) {
    case InputKind::kIsotropicGaussian: return "isotropic_gaussian";
    case InputKind::kAnisotropicGaussian: return "anisotropic_gaussian";
    case InputKind::kUniformCube: return "uniform_cube";
    case InputKind::kXorGaussianMixture: return "xor_gaussian_mixture";
  }
  return "?";
}

LabelKind label_kind_from_string(const std::string& s) {
  if (s == "xor") return LabelKind::kXor;
  if (s == "sinusoid") return LabelKind::kSinusoid;
  throw std::invalid_argument("unknown label kind: " + s);
}

std::string to_string(LabelKind k) {
  return k == LabelKind::kXor ? "xor" : "sinusoid";
}

void InputSpec::validate() const {
  if (dimension < 2) throw std::invalid_argument("input dimension must be >= 2");
  if (kind == InputKind::kAnisotropicGaussian && (aniso_lambda1 <= 0 || aniso_lambda2 <= 0))
    throw std::invalid_argument("anisotropic eigenvalues must be positive");
  if (kind == InputKind::kXorGaussianMixture && mixture_cluster_std <= 0)
    throw std::invalid_argument("mixture cluster std must be positive");
}

double InputSpec::resolved_mean_norm() const {
  return mixture_mean_norm > 0 ? mixture_mean_norm : std::sqrt(static_cast<double>(dimension));
}

void LabelSpec::validate() const {
  if (noise_rate < 0 || noise_rate >= 1)
    throw std::invalid_argument("noise_rate must be in [0, 1)");
}

int clean_label(LabelKind kind, double z1, double z2) {
  if (kind == LabelKind::kXor) {
    const double p = z1 * z2;
    if (p == 0.0) return 0;
    return p < 0 ? 1 : -1;
  }
  const double s = z2 - std::sin(z1);
  if (s == 0.0) return 0;
  return s > 0 ? 1 : -1;
}

void sample_input(const InputSpec& spec, rng::Stream& s, std::vector<double>& x) {
  const int d = spec.dimension;
  x.resize(static_cast<std::size_t>(d));
  switch (spec.kind) {
    case InputKind::kIsotropicGaussian:
      for (int i = 0; i < d; ++i) x[i] = s.normal();
      break;
    case InputKind::kAnisotropicGaussian: {
      for (int i = 0; i < d; ++i) x[i] = s.normal();
      const double g1 = x[0], g2 = x[1];
      const double a = std::sqrt(spec.aniso_lambda1) * g1;
      const double b = std::sqrt(spec.aniso_lambda2) * g2;
      x[0] = a * kMu1[0] + b * kMu2[0];
      x[1] = a * kMu1[1] + b * kMu2[1];
      break;
    }
    case InputKind::kUniformCube:
      for (int i = 0; i < d; ++i) x[i] = s.uniform(-1.0, 1.0);
      break;
    case InputKind::kXorGaussianMixture: {
      const double c = spec.resolved_mean_norm();
      const std::uint64_t which = s.next_u64() & 3u;
      const double sign = (which & 1u) ? -1.0 : 1.0;
      const auto& mu = (which & 2u) ? kMu2 : kMu1;
      for (int i = 0; i < d; ++i) x[i] = spec.mixture_cluster_std * s.normal();
      x[0] += sign * c * mu[0];
      x[1] += sign * c * mu[1];
      break;
    }
  }
}

LabeledSample sample_at(const InputSpec& spec, const LabelSpec& label,
                        const rng::Stream& input_stream,
                        const rng::Stream& noise_stream, std::uint64_t index) {
  LabeledSample out;
  rng::Stream in = input_stream.child(index);
  // Draws landing exactly on the decision boundary are resampled.
  int y = 0;
  do {
    sample_input(spec, in, out.x);
    y = clean_label(label.kind, out.x[0], out.x[1]);
  } while (y == 0);
  if (label.noise_rate > 0) {
    rng::Stream flip = noise_stream.child(index);
    if (flip.bernoulli(label.noise_rate)) y = -y;
  }
  out.y = y;
  out.z = {out.x[0], out.x[1]};
  return out;
}

std::vector<LabeledSample> sample_batch(const InputSpec& spec, const LabelSpec& label,
                                        std::uint64_t n, const rng::Stream& input_stream,
                                        const rng::Stream& noise_stream) {
  if (n < 1) throw std::invalid_argument("sample_batch: n must be >= 1");
  spec.validate();
  label.validate();
  std::vector<LabeledSample> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i)
    out.push_back(sample_at(spec, label, input_stream, noise_stream, i));
  return out;
}

double boundary_margin(double z1, double z2) {
  return std::min(std::abs(z1), std::abs(z2));
}

bool in_boundary_region(double z1, double z2, double eps) {
  return boundary_margin(z1, z2) <= eps;
}

}  // namespace blockdyn::dist
