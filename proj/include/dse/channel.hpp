#pragma once

#include <stdexcept>
#include <string>

namespace dse {

// Comparison tolerance on power levels and exponent values.
inline constexpr double kValueTol = 1e-9;
// Accuracy of the rate decomposition reconstruction, in delta_gamma units.
inline constexpr double kDecomposeTol = 1e-12;

// Static description of one problem instance: an M x N MIMO link with L
// independently fading blocks per codeword.
struct ChannelConfig {
  int tx_antennas = 1;
  int rx_antennas = 1;
  int blocks = 1;

  ChannelConfig(int m_tx, int n_rx, int l_blocks = 1);

  int min_ant() const { return tx_antennas < rx_antennas ? tx_antennas : rx_antennas; }
  int max_ant() const { return tx_antennas > rx_antennas ? tx_antennas : rx_antennas; }
};

// Multiplexing rate split against a power gap delta_gamma:
//   r = ((k*L + a) / L) * delta_gamma + delta,  0 <= delta < delta_gamma / L,
// with k in {0..m-1} and a in {0..L-1}.  For L = 1 the block index a is 0.
struct RateDecomposition {
  int k = 0;
  int a = 0;
  double delta = 0.0;
};

// Decomposes r against delta_gamma.  At an exact band boundary the larger k
// with delta = 0 is returned, which keeps the per-layer diversity
// right-continuous in the rate.  Throws std::domain_error when
// r >= m * delta_gamma (the layer has no degrees of freedom left) or when
// delta_gamma <= 0.
RateDecomposition decompose_rate(double r, double delta_gamma, const ChannelConfig& cfg);

// Optimal diversity-multiplexing tradeoff of a single Rayleigh block,
// piecewise linear between the integer points d(k) = (M-k)(N-k); zero for
// r >= min(M, N).
double dmt_zheng_tse(double r, const ChannelConfig& cfg);

// Genie-aided diversity of one superposition layer occupying power levels
// rho^gamma_prev down to rho^gamma_cur, single block.  Reduces to
// dmt_zheng_tse(r) at (gamma_prev, gamma_cur) = (1, 0).
double layer_diversity(double r, double gamma_prev, double gamma_cur, const ChannelConfig& cfg);

// Same for L independently fading blocks with the rate averaged over blocks.
// Equals layer_diversity exactly when cfg.blocks == 1.
double layer_diversity_L(double r, double gamma_prev, double gamma_cur, const ChannelConfig& cfg);

// Upper bound on any scheme's distortion SNR exponent when the transmitter
// knows the realization: sum_{i=1..m} min(b, (2i-1+n-m)L).  Piecewise linear,
// concave, saturating at m*n*L.
double informed_transmitter_bound(double b, const ChannelConfig& cfg);

}  // namespace dse
