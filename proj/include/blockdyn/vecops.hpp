#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace blockdyn::vec {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// y += alpha * x
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(double alpha, std::span<double> x) {
  for (double& v : x) v *= alpha;
}

// Norm of the tail coordinates x[2:].
inline double perp_norm(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 2; i < x.size(); ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

}  // namespace blockdyn::vec
