#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dse {

enum class SchemeId {
  it_bound,
  bs_limit,
  bs_finite,
  ls,
  lsblend,
  box_greedy,
  box_bruteforce,
};

std::string to_string(SchemeId id);

// Superposition stack.  gammas[i] is the power exponent left below layer i+1
// (gamma_0 = 1 implicit); rates[i] the layer's multiplexing rate.
struct LayerAllocation {
  std::vector<double> gammas;
  std::vector<double> rates;
  int k_target = 0;
  int a_target = 0;
  double epsilon = 0.0;
  // Set when b sits in a flat region and the stack was built at the adjacent
  // band edge, ignoring the extra bandwidth.
  bool flat_band = false;
  double effective_b = 0.0;
};

enum class FillOrder { sequential, max_available_power };

std::string to_string(FillOrder order);

// Nt time layers, each a stack of Ns superposition layers.  gamma[i][j] is
// the power exponent below superposition slot i+1 of time layer j+1
// (slot 0 implicit at 1).  Equal adjacent gammas encode a skipped slot and
// must carry zero rate.  cum_rate[s] is the cumulative source rate before the
// s-th visited cell, in fill order; its last entry is the total.
struct BoxGrid {
  int n_super = 0;
  int n_time = 0;
  std::vector<std::vector<double>> gamma;   // [n_super][n_time]
  std::vector<std::vector<double>> rate;    // [n_super][n_time]
  std::vector<double> cum_rate;             // length n_super*n_time + 1
  std::vector<std::pair<int, int>> visit;   // fill/decode order, 0-based (i, j)
  FillOrder order = FillOrder::sequential;
  double b = 0.0;
  int m_tx = 0;
  int n_rx = 0;
};

struct SchemeExponent {
  SchemeId scheme = SchemeId::it_bound;
  double b = 0.0;
  double exponent = 0.0;
  std::optional<LayerAllocation> allocation;
  std::optional<BoxGrid> grid;
  int arg_k = -1;
  int arg_a = -1;
  // Achievability probes recorded by searches (target, verdict).
  std::vector<std::pair<double, bool>> probes;
};

}  // namespace dse
