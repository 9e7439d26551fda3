#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dse/channel.hpp"
#include "dse/scheme.hpp"

namespace dse {

// Deterministic splittable generator (splitmix64 core + Box-Muller pairs).
// Streams are reproducible across platforms and shard layouts.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  double uniform();  // (0, 1]
  double normal();

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Derives the generator seed of one shard from the plan seed.
std::uint64_t shard_seed(std::uint64_t seed, std::uint64_t shard);

// Trials per shard; fixed so results are independent of the worker count.
inline constexpr std::uint64_t kShardTrials = 8192;

struct SimPlan {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  std::vector<double> snr_grid_db;
};

// Ordered eigenvalues (ascending) of H_l H_l^H for each fading block.
struct ChannelSample {
  std::vector<std::vector<double>> eigenvalues;  // [L][m]
};

ChannelSample sample_channel(const ChannelConfig& cfg, GaussianRng& rng);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

// Monte Carlo probability that the genie-aided mutual information of one
// superposition layer falls below r*log2(rho), averaged over blocks.
Estimate layer_outage_prob(double r, double gamma_prev, double gamma_cur, double snr_db,
                           const ChannelConfig& cfg, const SimPlan& plan);

// Mean end-to-end distortion of a successive-decoding cascade at finite SNR,
// with the outage idealization D = rho^{-b * decoded rate}.
Estimate scheme_distortion(const LayerAllocation& alloc, double b, double snr_db,
                           const ChannelConfig& cfg, const SimPlan& plan);
Estimate scheme_distortion(const BoxGrid& grid, double b, double snr_db,
                           const ChannelConfig& cfg, const SimPlan& plan);

struct SlopeEstimate {
  std::vector<double> snr_db_points;
  std::vector<double> log10_values;
  double slope = 0.0;      // reported SNR exponent (negated regression slope)
  double std_error = 0.0;
};

// Least-squares fit of log10(value) against log10(rho).  Throws
// std::domain_error on non-positive values (unresolved estimates).
SlopeEstimate fit_slope(const std::vector<std::pair<double, double>>& snr_db_value);

// Resolution threshold: estimates below 10/trials are excluded from fits.
inline constexpr double kMinResolvedCount = 10.0;

}  // namespace dse
