#include "blockdyn/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace blockdyn::quad {

namespace {

Rule make_gauss_legendre(int n) {
  if (n < 2) throw std::invalid_argument("gauss_legendre: order must be >= 2");
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double pi = std::numbers::pi;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-based initial guess for the i-th root of P_n.
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  static std::map<int, Rule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 int order, int panels) {
  const Rule& r = gauss_legendre(order);
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    double s = 0.0;
    for (std::size_t k = 0; k < r.nodes.size(); ++k)
      s += r.weights[k] * f(mid + 0.5 * h * r.nodes[k]);
    total += 0.5 * h * s;
  }
  return total;
}

namespace {
double phi(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}
}  // namespace

double normal_expect(const std::function<double(double)>& f, double cut,
                     int order, int panels) {
  return integrate([&](double x) { return f(x) * phi(x); }, -cut, cut, order, panels);
}

double normal_prob(double a, double b, int order, int panels) {
  return integrate(phi, a, b, order, panels);
}

double normal_upper_tail(double t, int order, int panels) {
  return integrate(phi, t, t + 40.0, order, panels);
}

double plane_expect(const std::function<double(double, double)>& f,
                    int radial_order, int angular_order, double r_max,
                    int radial_panels, int angular_panels) {
  const Rule& rr = gauss_legendre(radial_order);
  const Rule& ra = gauss_legendre(angular_order);
  const double pi = std::numbers::pi;
  double total = 0.0;
  for (int sector = 0; sector < 8; ++sector) {
    const double t0 = sector * pi / 4.0;
    const double dt = (pi / 4.0) / angular_panels;
    for (int ap = 0; ap < angular_panels; ++ap) {
      const double tlo = t0 + ap * dt;
      const double tmid = tlo + 0.5 * dt;
      for (std::size_t ia = 0; ia < ra.nodes.size(); ++ia) {
        const double theta = tmid + 0.5 * dt * ra.nodes[ia];
        const double wa = 0.5 * dt * ra.weights[ia];
        const double c = std::cos(theta), s = std::sin(theta);
        const double hr = r_max / radial_panels;
        double radial = 0.0;
        for (int rp = 0; rp < radial_panels; ++rp) {
          const double rlo = rp * hr;
          const double rmid = rlo + 0.5 * hr;
          for (std::size_t ir = 0; ir < rr.nodes.size(); ++ir) {
            const double rad = rmid + 0.5 * hr * rr.nodes[ir];
            const double wr = 0.5 * hr * rr.weights[ir];
            radial += wr * f(rad * c, rad * s) * rad * std::exp(-0.5 * rad * rad);
          }
        }
        total += wa * radial;
      }
    }
  }
  return total / (2.0 * pi);
}

}  // namespace blockdyn::quad
