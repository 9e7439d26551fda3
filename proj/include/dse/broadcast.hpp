#pragma once

#include <utility>
#include <vector>

#include "dse/channel.hpp"
#include "dse/scheme.hpp"

namespace dse {

// Default rate back-off for the equal-exponent allocations.
inline constexpr double kDefaultEpsilon = 1e-6;
// Backoff used to build allocations at a band edge when b sits in a flat
// region.
inline constexpr double kBandBackoff = 1e-6;

// Open b-interval on which the superposition stack with target index k
// (slope k+1) is defined, single block.
std::pair<double, double> bs_band(const ChannelConfig& cfg, int k);

// Open b-interval for the (k, a) target of the L-block construction
// (slope (k*L+a+1)/L).
std::pair<double, double> bs_band_L(const ChannelConfig& cfg, int k, int a);

// Geometric power ladder gamma_i = alpha^i with rates (k+1)*dgamma - epsilon,
// valid for b strictly inside bs_band(cfg, k).  Single block.
LayerAllocation bs_allocation(double b, const ChannelConfig& cfg, int k, int n_layers,
                              double epsilon);

// L-block generalization with rates ((k*L+a+1)/L)*dgamma - epsilon, valid for
// b strictly inside bs_band_L(cfg, k, a).
LayerAllocation bs_allocation_L(double b, const ChannelConfig& cfg, int k, int a, int n_layers,
                                double epsilon);

// Band lookup plus flat-region handling: inside a band delegates to the
// construction above; in a flat region builds the stack at the adjacent band
// edge (minus kBandBackoff) and flags it, leaving the extra bandwidth unused.
LayerAllocation bs_allocation_auto(double b, const ChannelConfig& cfg, int n_layers,
                                   double epsilon);

// Exponent of the equal-exponent stack with n_layers layers and target k;
// converges to b*(k+1) from below as n_layers grows.  Single block.
double bs_finite_closed_form(double b, const ChannelConfig& cfg, int k, int n_layers);

// Limiting superposition exponent, single block: b*(k+1) on each band,
// (M-k)(N-k) on the flat regions, MN beyond b = MN.
SchemeExponent bs_limit_exponent(double b, const ChannelConfig& cfg);

// L-block limiting exponent: slope (k*L+a+1)/L on each (k, a) band, constant
// across the gaps between consecutive bands, MNL beyond b = MNL^2.
SchemeExponent bs_limit_exponent_L(double b, const ChannelConfig& cfg);

// Per-layer outage exponents of a stack: entry i is the cumulative decoded
// source exponent plus the genie diversity of layer i+1; the final entry is
// the all-decoded exponent.  The scheme exponent is the minimum entry.
std::vector<double> bs_layer_exponents(const LayerAllocation& alloc, double b,
                                       const ChannelConfig& cfg);

// Exact finite-layer optimum via one linear program per k-vector, maximizing
// the worst per-layer exponent; also run for every smaller layer count so
// unused layers can be dropped.  Single block, n_layers <= 8.
SchemeExponent bs_finite_optimal(double b, const ChannelConfig& cfg, int n_layers);

// Upper bound on any superposition scheme at this b: the lower envelope of
// the (M-k)(N-k) caps and the b*(k+1) slopes.  Coincides with
// bs_limit_exponent everywhere.
double bs_upper_envelope(double b, const ChannelConfig& cfg);

}  // namespace dse
