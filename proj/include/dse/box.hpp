#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dse/channel.hpp"
#include "dse/scheme.hpp"

namespace dse {

// Assembles a grid from explicit power/rate matrices, filling the cumulative
// rates and the visit order (row-major under sequential filling).
BoxGrid box_build_grid(std::vector<std::vector<double>> gamma,
                       std::vector<std::vector<double>> rate, double b,
                       const ChannelConfig& cfg, FillOrder order = FillOrder::sequential);

// Worst-case outage exponent of a grid: minimum over the per-cell genie
// diversity plus the cell's cumulative source exponent, and the all-decoded
// exponent.  Skipped cells (equal gammas, zero rate) are never in outage.
double box_grid_exponent(const BoxGrid& grid, double b, const ChannelConfig& cfg);

struct BoxFeasibility {
  bool achievable = false;
  BoxGrid grid;
};

// Greedy feasibility check for a target exponent d: fills cells in order,
// equalizing each cell's exponent at d, and succeeds once the cumulative
// source exponent exceeds d.
BoxFeasibility box_is_achievable(double d, double b, const ChannelConfig& cfg, int n_super,
                                 int n_time, FillOrder order);

// Largest achievable target found by a coarse scan (step M*N/64) plus
// bisection on the highest achievable bracket; all probes are recorded.
SchemeExponent box_max_exponent(double b, const ChannelConfig& cfg, int n_super, int n_time,
                                FillOrder order, double tol = 1e-4);

// Exhaustive small-instance optimum: one linear program per assignment of
// {skip, k=0..m-1} to each cell.  Requires n_super*n_time <= 6.
SchemeExponent box_bruteforce_small(double b, const ChannelConfig& cfg, int n_super, int n_time);

std::string box_grid_to_json(const BoxGrid& grid);

}  // namespace dse
