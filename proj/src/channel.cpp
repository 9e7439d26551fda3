#include "dse/channel.hpp"

#include <cmath>

namespace dse {

ChannelConfig::ChannelConfig(int m_tx, int n_rx, int l_blocks)
    : tx_antennas(m_tx), rx_antennas(n_rx), blocks(l_blocks) {
  if (m_tx < 1 || n_rx < 1 || l_blocks < 1) {
    throw std::domain_error("channel config requires M >= 1, N >= 1, L >= 1");
  }
}

RateDecomposition decompose_rate(double r, double delta_gamma, const ChannelConfig& cfg) {
  if (!(delta_gamma > 0.0)) {
    throw std::domain_error("rate decomposition requires delta_gamma > 0");
  }
  if (r < 0.0 || !std::isfinite(r)) {
    throw std::domain_error("rate decomposition requires r >= 0");
  }
  const int m = cfg.min_ant();
  const int L = cfg.blocks;

  double u = r * static_cast<double>(L) / delta_gamma;
  double idx = std::floor(u);
  double frac = u - idx;
  // Snap exact band boundaries upward: r = j/L * delta_gamma lands on the
  // larger index with delta = 0.
  if (1.0 - frac <= kDecomposeTol * L) {
    idx += 1.0;
    frac = 0.0;
  }
  if (idx >= static_cast<double>(m) * L) {
    throw std::domain_error("rate exceeds the layer's degrees of freedom (r >= m*delta_gamma)");
  }
  const int j = static_cast<int>(idx);
  RateDecomposition d;
  d.k = j / L;
  d.a = j % L;
  d.delta = frac * delta_gamma / L;
  return d;
}

double dmt_zheng_tse(double r, const ChannelConfig& cfg) {
  if (r < 0.0 || !std::isfinite(r)) {
    throw std::domain_error("multiplexing rate must be non-negative and finite");
  }
  const double M = cfg.tx_antennas;
  const double N = cfg.rx_antennas;
  const int m = cfg.min_ant();
  if (r >= static_cast<double>(m)) return 0.0;
  const double k = std::floor(r);
  return (M - k) * (N - k) - (M + N - 1.0 - 2.0 * k) * (r - k);
}

namespace {

void check_layer_args(double r, double gamma_prev, double gamma_cur) {
  if (!(gamma_prev > 0.0) || gamma_prev > 1.0 + kValueTol) {
    throw std::domain_error("layer diversity requires 0 < gamma_prev <= 1");
  }
  if (gamma_cur < 0.0 || gamma_cur >= gamma_prev) {
    throw std::domain_error("layer diversity requires 0 <= gamma_cur < gamma_prev");
  }
  if (r < 0.0 || !std::isfinite(r)) {
    throw std::domain_error("layer rate must be non-negative and finite");
  }
}

}  // namespace

double layer_diversity(double r, double gamma_prev, double gamma_cur, const ChannelConfig& cfg) {
  if (cfg.blocks != 1) {
    throw std::domain_error("layer_diversity is the single-block form; use layer_diversity_L");
  }
  check_layer_args(r, gamma_prev, gamma_cur);
  const RateDecomposition d = decompose_rate(r, gamma_prev - gamma_cur, cfg);
  const double m = cfg.min_ant();
  const double n = cfg.max_ant();
  return (m - d.k) * (n - d.k) * gamma_prev - (m + n - 1.0 - 2.0 * d.k) * d.delta;
}

double layer_diversity_L(double r, double gamma_prev, double gamma_cur, const ChannelConfig& cfg) {
  check_layer_args(r, gamma_prev, gamma_cur);
  const RateDecomposition d = decompose_rate(r, gamma_prev - gamma_cur, cfg);
  const double m = cfg.min_ant();
  const double n = cfg.max_ant();
  const double L = cfg.blocks;
  return L * (m - d.k) * (n - d.k) * gamma_prev -
         (m + n - 1.0 - 2.0 * d.k) * (d.a * gamma_prev + L * d.delta);
}

double informed_transmitter_bound(double b, const ChannelConfig& cfg) {
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw std::domain_error("bandwidth ratio must be positive and finite");
  }
  const int m = cfg.min_ant();
  const int n = cfg.max_ant();
  const double L = cfg.blocks;
  double sum = 0.0;
  for (int i = 1; i <= m; ++i) {
    const double cap = (2.0 * i - 1.0 + n - m) * L;
    sum += b < cap ? b : cap;
  }
  return sum;
}

}  // namespace dse
