#include "dse/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "dse/parallel.hpp"

namespace dse {

std::uint64_t GaussianRng::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double GaussianRng::uniform() {
  return ((next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
}

double GaussianRng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  spare_ = mag * std::sin(ang);
  have_spare_ = true;
  return mag * std::cos(ang);
}

std::uint64_t shard_seed(std::uint64_t seed, std::uint64_t shard) {
  GaussianRng mix(seed ^ (0xA076'1D64'78BD'642FULL * (shard + 1)));
  return mix.next_u64();
}

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Eigenvalues of the Gram matrix of one block, ascending.
void block_eigenvalues(const ChannelConfig& cfg, GaussianRng& rng, std::vector<double>& out) {
  const int M = cfg.tx_antennas, N = cfg.rx_antennas;
  const int m = cfg.min_ant();
  out.assign(m, 0.0);
  if (m == 1) {
    double sum = 0.0;
    for (int e = 0; e < M * N; ++e) {
      const double re = rng.normal() * kInvSqrt2;
      const double im = rng.normal() * kInvSqrt2;
      sum += re * re + im * im;
    }
    out[0] = sum;
    return;
  }
  Eigen::MatrixXcd h(N, M);
  for (int c = 0; c < M; ++c) {
    for (int r = 0; r < N; ++r) {
      h(r, c) = std::complex<double>(rng.normal() * kInvSqrt2, rng.normal() * kInvSqrt2);
    }
  }
  if (m == 2) {
    // Closed-form Hermitian 2x2 spectrum of the smaller Gram matrix.
    Eigen::MatrixXcd g = M <= N ? Eigen::MatrixXcd(h.adjoint() * h) : Eigen::MatrixXcd(h * h.adjoint());
    const double a = g(0, 0).real();
    const double d = g(1, 1).real();
    const double c2 = std::norm(g(0, 1));
    const double root = std::sqrt((a - d) * (a - d) + 4.0 * c2);
    out[0] = std::max(0.0, 0.5 * (a + d - root));
    out[1] = 0.5 * (a + d + root);
    return;
  }
  Eigen::MatrixXcd g = M <= N ? Eigen::MatrixXcd(h.adjoint() * h) : Eigen::MatrixXcd(h * h.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
  for (int i = 0; i < m; ++i) out[i] = std::max(0.0, es.eigenvalues()[i]);
}

// log2 det(I + (rho^gamma / M) * G) from the Gram spectrum.
double block_mi(const std::vector<double>& eigs, double rho_gamma_over_m) {
  double v = 0.0;
  for (const double lam : eigs) v += std::log1p(rho_gamma_over_m * lam);
  return v * std::numbers::log2e;
}

// Mutual information available to one layer on one block.  A zero lower
// level means no residual interference (the receiver noise is already in the
// identity term).
double layer_mi(const std::vector<double>& eigs, double rho, double gamma_prev, double gamma_cur,
                int m_tx) {
  const double hi = block_mi(eigs, std::pow(rho, gamma_prev) / m_tx);
  if (gamma_cur <= 0.0) return hi;
  return hi - block_mi(eigs, std::pow(rho, gamma_cur) / m_tx);
}

// Runs plan.trials trials split into fixed shards; per-shard partial sums are
// reduced in shard order, so the result is independent of the worker count.
template <typename TrialFn>
double run_trials(const SimPlan& plan, const ChannelConfig& cfg, TrialFn&& trial) {
  const std::uint64_t shards = (plan.trials + kShardTrials - 1) / kShardTrials;
  std::vector<double> partial(shards, 0.0);
  parallel_for(shards, [&](std::size_t s) {
    GaussianRng rng(shard_seed(plan.seed, s));
    const std::uint64_t begin = s * kShardTrials;
    const std::uint64_t count = std::min(kShardTrials, plan.trials - begin);
    std::vector<std::vector<double>> eigs(cfg.blocks);
    double acc = 0.0;
    for (std::uint64_t t = 0; t < count; ++t) {
      for (int l = 0; l < cfg.blocks; ++l) block_eigenvalues(cfg, rng, eigs[l]);
      acc += trial(eigs);
    }
    partial[s] = acc;
  });
  double total = 0.0;
  for (const double p : partial) total += p;
  return total;
}

}  // namespace

ChannelSample sample_channel(const ChannelConfig& cfg, GaussianRng& rng) {
  ChannelSample s;
  s.eigenvalues.resize(cfg.blocks);
  for (int l = 0; l < cfg.blocks; ++l) block_eigenvalues(cfg, rng, s.eigenvalues[l]);
  return s;
}

Estimate layer_outage_prob(double r, double gamma_prev, double gamma_cur, double snr_db,
                           const ChannelConfig& cfg, const SimPlan& plan) {
  if (plan.trials < 1) throw std::domain_error("plan needs at least one trial");
  if (!(gamma_prev > 0.0) || gamma_cur < 0.0 || gamma_cur >= gamma_prev) {
    throw std::domain_error("layer outage requires 0 <= gamma_cur < gamma_prev");
  }
  if (r < 0.0) throw std::domain_error("rate must be non-negative");
  const double rho = std::pow(10.0, snr_db / 10.0);
  const double threshold = r * std::log2(rho);
  const double hits = run_trials(plan, cfg, [&](const std::vector<std::vector<double>>& eigs) {
    double mi = 0.0;
    for (int l = 0; l < cfg.blocks; ++l) {
      mi += layer_mi(eigs[l], rho, gamma_prev, gamma_cur, cfg.tx_antennas);
    }
    return mi / cfg.blocks < threshold ? 1.0 : 0.0;
  });
  Estimate e;
  e.trials = plan.trials;
  e.value = hits / plan.trials;
  e.std_error = std::sqrt(e.value * (1.0 - e.value) / plan.trials);
  return e;
}

Estimate scheme_distortion(const LayerAllocation& alloc, double b, double snr_db,
                           const ChannelConfig& cfg, const SimPlan& plan) {
  if (alloc.gammas.size() != alloc.rates.size() || alloc.gammas.empty()) {
    throw std::domain_error("allocation must have matching layer counts");
  }
  const double rho = std::pow(10.0, snr_db / 10.0);
  const double log2rho = std::log2(rho);
  const double sum = run_trials(plan, cfg, [&](const std::vector<std::vector<double>>& eigs) {
    double prev = 1.0;
    double decoded = 0.0;
    for (std::size_t i = 0; i < alloc.gammas.size(); ++i) {
      double mi = 0.0;
      for (int l = 0; l < cfg.blocks; ++l) {
        mi += layer_mi(eigs[l], rho, prev, alloc.gammas[i], cfg.tx_antennas);
      }
      if (mi / cfg.blocks < alloc.rates[i] * log2rho) break;
      decoded += alloc.rates[i];
      prev = alloc.gammas[i];
    }
    return std::pow(rho, -b * decoded);
  });
  Estimate e;
  e.trials = plan.trials;
  e.value = sum / plan.trials;
  e.std_error = 0.0;
  return e;
}

Estimate scheme_distortion(const BoxGrid& grid, double b, double snr_db, const ChannelConfig& cfg,
                           const SimPlan& plan) {
  if (cfg.blocks != 1) throw std::domain_error("box decoding requires L = 1");
  const double rho = std::pow(10.0, snr_db / 10.0);
  const double log2rho = std::log2(rho);
  const double sum = run_trials(plan, cfg, [&](const std::vector<std::vector<double>>& eigs) {
    double decoded = 0.0;
    for (const auto& [i, j] : grid.visit) {
      const double gp = i == 0 ? 1.0 : grid.gamma[i - 1][j];
      const double gc = grid.gamma[i][j];
      const double r = grid.rate[i][j];
      if (gp - gc <= 1e-15) continue;  // skipped slot, nothing to decode
      if (layer_mi(eigs[0], rho, gp, gc, cfg.tx_antennas) < r * log2rho) {
        return std::pow(rho, -b / grid.n_time * decoded);
      }
      decoded += r;
    }
    return std::pow(rho, -b / grid.n_time * decoded);
  });
  Estimate e;
  e.trials = plan.trials;
  e.value = sum / plan.trials;
  e.std_error = 0.0;
  return e;
}

SlopeEstimate fit_slope(const std::vector<std::pair<double, double>>& snr_db_value) {
  if (snr_db_value.size() < 3) {
    throw std::domain_error("slope fit needs at least three points");
  }
  SlopeEstimate out;
  for (const auto& [db, v] : snr_db_value) {
    if (!(v > 0.0)) {
      throw std::domain_error("slope fit is unresolved: non-positive estimate");
    }
    out.snr_db_points.push_back(db);
    out.log10_values.push_back(std::log10(v));
  }
  const std::size_t n = out.snr_db_points.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += out.snr_db_points[i] / 10.0;
    my += out.log10_values[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = out.snr_db_points[i] / 10.0 - mx;
    sxx += dx * dx;
    sxy += dx * (out.log10_values[i] - my);
  }
  const double beta = sxy / sxx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double fit = my + beta * (out.snr_db_points[i] / 10.0 - mx);
    const double res = out.log10_values[i] - fit;
    ssr += res * res;
  }
  out.slope = -beta;
  out.std_error = std::sqrt(ssr / (n - 2) / sxx);
  return out;
}

}  // namespace dse
