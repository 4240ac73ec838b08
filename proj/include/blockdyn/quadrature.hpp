#pragma once

#include <functional>
#include <vector>

namespace blockdyn::quad {

struct Rule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre rule of order n (Newton iteration on the Legendre recurrence).
const Rule& gauss_legendre(int n);

// Composite Gauss-Legendre integral of f over [a, b] with `panels` panels.
double integrate(const std::function<double(double)>& f, double a, double b,
                 int order = 64, int panels = 8);

// E[f(X)] for X ~ N(0,1), integrated over [-cut, cut].
double normal_expect(const std::function<double(double)>& f, double cut = 12.0,
                     int order = 64, int panels = 16);

// P(a <= X <= b) for X ~ N(0,1) by quadrature of the density.
double normal_prob(double a, double b, int order = 64, int panels = 16);

// P(X >= t) for X ~ N(0,1); integrates the density over [t, t + 40].
double normal_upper_tail(double t, int order = 64, int panels = 32);

// E[f(Z)] for Z ~ N(0, I_2). The plane is split into the 8 sectors bounded
// by the axes and the diagonals |z1| = |z2|, and each sector is integrated
// in polar coordinates with a tensor Gauss-Legendre grid, so integrands with
// kinks on those lines stay smooth inside every panel.
double plane_expect(const std::function<double(double, double)>& f,
                    int radial_order = 64, int angular_order = 64,
                    double r_max = 12.0, int radial_panels = 8,
                    int angular_panels = 1);

}  // namespace blockdyn::quad
