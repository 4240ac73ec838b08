#include "blockdyn/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "blockdyn/distributions.hpp"
#include "blockdyn/parallel.hpp"
#include "blockdyn/quadrature.hpp"
#include "blockdyn/vecops.hpp"

namespace blockdyn::oracle {

double oracle_forward(double z1, double z2, double mass) {
  const double x1 = z1 * dist::kMu1[0] + z2 * dist::kMu1[1];
  const double x2 = z1 * dist::kMu2[0] + z2 * dist::kMu2[1];
  return mass * (std::abs(x1) - std::abs(x2));
}

int label2d(double z1, double z2) {
  const double p = z1 * z2;
  if (p == 0.0) return 0;
  return p < 0 ? 1 : -1;
}

double oracle_loss_derivative(double z1, double z2, double mass) {
  int y = label2d(z1, z2);
  if (y == 0) y = 1;  // zero-measure boundary: |l'| = 1 there for any mass
  return net::loss_derivative(oracle_forward(z1, z2, mass), y);
}

namespace {

struct Accum {
  double sum = 0.0;
  double sum_sq = 0.0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
  }
};

MarginEstimate finish(const std::vector<Accum>& chunks, std::uint64_t n, MarginKind kind) {
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& c : chunks) {
    sum += c.sum;
    sum_sq += c.sum_sq;
  }
  MarginEstimate est;
  est.n_samples = n;
  est.kind = kind;
  est.value = sum / static_cast<double>(n);
  const double var =
      std::max(0.0, (sum_sq - sum * sum / static_cast<double>(n)) / static_cast<double>(n - 1));
  est.std_err = std::sqrt(var / static_cast<double>(n));
  return est;
}

}  // namespace

MarginEstimate estimate_g_mu(double mass, std::uint64_t n_samples, rng::Stream stream,
                             int direction) {
  if (n_samples < 10000) throw std::invalid_argument("estimate_g_mu: need >= 1e4 samples");
  const auto& mu = (direction == 0) ? dist::kMu1 : dist::kMu2;
  std::vector<Accum> chunks(par::chunk_count(n_samples));
  par::for_chunks(n_samples, [&](std::uint64_t c, std::uint64_t lo, std::uint64_t hi) {
    rng::Stream s = stream.child(c);
    Accum acc;
    for (std::uint64_t i = lo; i < hi; ++i) {
      const double z1 = s.normal(), z2 = s.normal();
      const int y = label2d(z1, z2);
      const double u = mu[0] * z1 + mu[1] * z2;
      if (y == 0 || u <= 0) {
        acc.add(0.0);
        continue;
      }
      const double lmag = std::abs(oracle_loss_derivative(z1, z2, mass));
      acc.add(y * lmag * u);
    }
    chunks[c] = acc;
  });
  return finish(chunks, n_samples, MarginKind::kGMu);
}

MarginEstimate estimate_g_rho(double mass, std::uint64_t n_samples, rng::Stream stream) {
  if (n_samples < 10000) throw std::invalid_argument("estimate_g_rho: need >= 1e4 samples");
  std::vector<Accum> chunks(par::chunk_count(n_samples));
  par::for_chunks(n_samples, [&](std::uint64_t c, std::uint64_t lo, std::uint64_t hi) {
    rng::Stream s = stream.child(c);
    Accum acc;
    for (std::uint64_t i = lo; i < hi; ++i) {
      const double z1 = s.normal(), z2 = s.normal();
      acc.add(std::abs(oracle_loss_derivative(z1, z2, mass)));
    }
    chunks[c] = acc;
  });
  return finish(chunks, n_samples, MarginKind::kGRho);
}

double g_rho_paired_difference(double mass_lo, double mass_hi, std::uint64_t n_samples,
                               rng::Stream stream) {
  std::vector<Accum> chunks(par::chunk_count(n_samples));
  par::for_chunks(n_samples, [&](std::uint64_t c, std::uint64_t lo, std::uint64_t hi) {
    rng::Stream s = stream.child(c);
    Accum acc;
    for (std::uint64_t i = lo; i < hi; ++i) {
      const double z1 = s.normal(), z2 = s.normal();
      acc.add(std::abs(oracle_loss_derivative(z1, z2, mass_lo)) -
              std::abs(oracle_loss_derivative(z1, z2, mass_hi)));
    }
    chunks[c] = acc;
  });
  double sum = 0.0;
  for (const auto& c : chunks) sum += c.sum;
  return sum / static_cast<double>(n_samples);
}

double g_mu_quadrature(double mass, int order) {
  // Extra angular panels resolve the exp(-mass * margin) boundary layers
  // along the sector edges when the mass is large.
  const int panels = std::max(1, static_cast<int>(mass / 4.0) + 1);
  return quad::plane_expect(
      [&](double z1, double z2) {
        const int y = label2d(z1, z2);
        if (y == 0) return 0.0;
        const double u = dist::kMu1[0] * z1 + dist::kMu1[1] * z2;
        if (u <= 0) return 0.0;
        return y * std::abs(oracle_loss_derivative(z1, z2, mass)) * u;
      },
      order, order, 12.0, 8, panels);
}

double g_rho_quadrature(double mass, int order) {
  const int panels = std::max(1, static_cast<int>(mass / 4.0) + 1);
  return quad::plane_expect(
      [&](double z1, double z2) {
        return std::abs(oracle_loss_derivative(z1, z2, mass));
      },
      order, order, 12.0, 8, panels);
}

CleanGradient clean_gradient(std::span<const double> w, double a, LossMode mode,
                             double mass, const net::NetworkState* network,
                             std::uint64_t n_samples, rng::Stream stream,
                             std::span<const double> proj_dir) {
  if (mode == LossMode::kRealNetwork && network == nullptr)
    throw std::invalid_argument("clean_gradient: network mode needs a network");
  const std::size_t d = w.size();
  const std::uint64_t nchunks = par::chunk_count(n_samples);

  struct ChunkState {
    std::vector<double> gw;
    Accum ga;
    Accum proj;
  };
  std::vector<ChunkState> chunks(nchunks);
  par::for_chunks(n_samples, [&](std::uint64_t c, std::uint64_t lo, std::uint64_t hi) {
    rng::Stream s = stream.child(c);
    ChunkState st;
    st.gw.assign(d, 0.0);
    std::vector<double> x(d);
    for (std::uint64_t i = lo; i < hi; ++i) {
      for (std::size_t k = 0; k < d; ++k) x[k] = s.normal();
      double lp;
      if (mode == LossMode::kOracle) {
        lp = oracle_loss_derivative(x[0], x[1], mass);
      } else {
        int y = label2d(x[0], x[1]);
        if (y == 0) y = 1;
        lp = net::loss_derivative(net::forward2d(*network, x[0], x[1]), y);
      }
      const double u = vec::dot(w, x);
      const double act = u > 0 ? 1.0 : 0.0;
      st.ga.add(lp * (u > 0 ? u : 0.0));
      if (act > 0) vec::axpy(lp * a, x, st.gw);
      if (!proj_dir.empty()) st.proj.add(act * lp * a * vec::dot(proj_dir, x));
    }
    chunks[c] = std::move(st);
  });

  CleanGradient out;
  out.grad_w.assign(d, 0.0);
  Accum ga, proj;
  for (const auto& st : chunks) {
    for (std::size_t k = 0; k < d; ++k) out.grad_w[k] += st.gw[k];
    ga.sum += st.ga.sum;
    ga.sum_sq += st.ga.sum_sq;
    proj.sum += st.proj.sum;
    proj.sum_sq += st.proj.sum_sq;
  }
  const double n = static_cast<double>(n_samples);
  for (auto& v : out.grad_w) v /= n;
  out.grad_a = ga.sum / n;
  out.grad_a_std_err =
      std::sqrt(std::max(0.0, (ga.sum_sq - ga.sum * ga.sum / n) / (n - 1)) / n);
  if (!proj_dir.empty()) {
    out.proj_value = proj.sum / n;
    out.proj_std_err =
        std::sqrt(std::max(0.0, (proj.sum_sq - proj.sum * proj.sum / n) / (n - 1)) / n);
  }
  return out;
}

double predicted_block_growth(double mass, double g_mu, double eta) {
  return (1.0 + 2.0 * eta * g_mu) * mass;
}

}  // namespace blockdyn::oracle
