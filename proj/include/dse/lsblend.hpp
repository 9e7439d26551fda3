#pragma once

#include <vector>

#include "dse/channel.hpp"
#include "dse/scheme.hpp"

namespace dse {

// Bandwidth consumed by the terminal superposition stack of the time-layered
// scheme with split parameter k (k = m is pure time layering, b_m = 0).
double lsblend_bandwidth_split(const ChannelConfig& cfg, int k);

// L-block version, indexed by the (k, a) target of the terminal stack with
// compound index j = k*L + a in {1..m*L}; j = m*L is pure time layering.
double lsblend_bandwidth_split_L(const ChannelConfig& cfg, int k, int a);

// Limiting exponent of time layering with a terminal superposition stack of
// bandwidth b_k, for b > b_k.  Single block.
SchemeExponent lsblend_exponent(double b, const ChannelConfig& cfg, int k);

// Best split: max over k in {1..m} of lsblend_exponent.  Single block.
SchemeExponent lsblend_best(double b, const ChannelConfig& cfg);

// L-block exponent for terminal-stack target (k, a); reduces to
// lsblend_exponent when L = 1 (compound index j maps to the split k).
SchemeExponent lsblend_exponent_L(double b, const ChannelConfig& cfg, int k, int a);

// Finite time-layer rates from the equal-exponent recursion, run backward
// from the terminal rate r_{Nt} = k.  Returned ascending (r_1 ... r_Nt); the
// scheme exponent converges to dmt_zheng_tse(r_1) as n_time grows.
std::vector<double> ls_time_layer_rates(double b_time, const ChannelConfig& cfg, int k,
                                        int n_time);

}  // namespace dse
