#include "dse/broadcast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dse/linprog.hpp"

namespace dse {

namespace {

// Slack used when relaxing the strict inequalities of the finite-layer
// program to a closed feasible set.
constexpr double kStrictSlack = 1e-6;

void check_band_index(const ChannelConfig& cfg, int k) {
  if (k < 0 || k >= cfg.min_ant()) {
    throw std::domain_error("target index k must lie in {0..m-1}");
  }
}

double alpha_single_block(double b, const ChannelConfig& cfg, int k) {
  const double M = cfg.tx_antennas, N = cfg.rx_antennas;
  return (b * (k + 1) - (M - k - 1) * (N - k - 1)) / (M + N - 1 - 2.0 * k);
}

}  // namespace

std::pair<double, double> bs_band(const ChannelConfig& cfg, int k) {
  check_band_index(cfg, k);
  const double M = cfg.tx_antennas, N = cfg.rx_antennas;
  return {(M - k - 1) * (N - k - 1) / (k + 1.0), (M - k) * (N - k) / (k + 1.0)};
}

std::pair<double, double> bs_band_L(const ChannelConfig& cfg, int k, int a) {
  check_band_index(cfg, k);
  if (a < 0 || a >= cfg.blocks) {
    throw std::domain_error("block offset a must lie in {0..L-1}");
  }
  const double M = cfg.tx_antennas, N = cfg.rx_antennas, L = cfg.blocks;
  const double j = k * L + a;
  const double lo = L * (L * (M - k) * (N - k) - (a + 1) * (M + N - 1 - 2.0 * k)) / (j + 1.0);
  const double hi = L * (L * (M - k) * (N - k) - a * (M + N - 1 - 2.0 * k)) / (j + 1.0);
  return {std::max(lo, 0.0), hi};
}

LayerAllocation bs_allocation(double b, const ChannelConfig& cfg, int k, int n_layers,
                              double epsilon) {
  if (cfg.blocks != 1) {
    throw std::domain_error("single-block allocation requires L = 1");
  }
  if (n_layers < 1) throw std::domain_error("allocation needs at least one layer");
  if (epsilon < 0.0) throw std::domain_error("epsilon must be non-negative");
  const auto [lo, hi] = bs_band(cfg, k);
  if (!(b > lo && b < hi)) {
    throw std::domain_error("b outside the open allocation band for this k");
  }
  const double alpha = alpha_single_block(b, cfg, k);
  LayerAllocation out;
  out.k_target = k;
  out.a_target = 0;
  out.epsilon = epsilon;
  out.effective_b = b;
  out.gammas.resize(n_layers);
  out.rates.resize(n_layers);
  double prev = 1.0;
  for (int i = 0; i < n_layers; ++i) {
    const double g = prev * alpha;
    out.gammas[i] = g;
    out.rates[i] = std::max(0.0, (k + 1) * (prev - g) - epsilon);
    prev = g;
  }
  return out;
}

LayerAllocation bs_allocation_L(double b, const ChannelConfig& cfg, int k, int a, int n_layers,
                                double epsilon) {
  if (n_layers < 1) throw std::domain_error("allocation needs at least one layer");
  if (epsilon < 0.0) throw std::domain_error("epsilon must be non-negative");
  check_band_index(cfg, k);
  const double M = cfg.tx_antennas, N = cfg.rx_antennas, L = cfg.blocks;
  if (a < 0 || a >= cfg.blocks) {
    throw std::domain_error("block offset a must lie in {0..L-1}");
  }
  const double slope = (k * L + a + 1) / L;
  const double alpha = 1.0 + a + (b * slope - L * (M - k) * (N - k)) / (M + N - 1 - 2.0 * k);
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("b outside the open allocation band for this (k, a)");
  }
  LayerAllocation out;
  out.k_target = k;
  out.a_target = a;
  out.epsilon = epsilon;
  out.effective_b = b;
  out.gammas.resize(n_layers);
  out.rates.resize(n_layers);
  double prev = 1.0;
  for (int i = 0; i < n_layers; ++i) {
    const double g = prev * alpha;
    out.gammas[i] = g;
    out.rates[i] = std::max(0.0, slope * (prev - g) - epsilon);
    prev = g;
  }
  return out;
}

namespace {

// Equal-exponent ladder with the finite-layer offset: gamma_i = (1-B)alpha^i + B
// with B chosen so the all-decoded exponent matches the per-layer ones.  The
// pure alpha^i ladder is the B -> 0 limit and degenerates near a band edge,
// where this form stays usable for small layer counts.
LayerAllocation equalized_ladder(double b, const ChannelConfig& cfg, int k, int a, int n_layers,
                                 double epsilon) {
  const double M = cfg.tx_antennas, N = cfg.rx_antennas, L = cfg.blocks;
  const double slope = (k * L + a + 1) / L;
  const double w = M + N - 1 - 2.0 * k;
  const double alpha = 1.0 + a + (b * slope - L * (M - k) * (N - k)) / w;
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("b outside the open allocation band for this (k, a)");
  }
  const double an = std::pow(alpha, n_layers);
  const double B = -b * slope * an / (b * slope * (1.0 - an) + w * (1.0 - alpha));
  LayerAllocation out;
  out.k_target = k;
  out.a_target = a;
  out.epsilon = epsilon;
  out.effective_b = b;
  out.gammas.resize(n_layers);
  out.rates.resize(n_layers);
  double prev = 1.0;
  double pow_a = 1.0;
  for (int i = 0; i < n_layers; ++i) {
    pow_a *= alpha;
    const double g = (1.0 - B) * pow_a + B;
    out.gammas[i] = g;
    out.rates[i] = std::max(0.0, slope * (prev - g) - epsilon);
    prev = g;
  }
  return out;
}

LayerAllocation flat_edge_allocation(const ChannelConfig& cfg, int j, int n_layers,
                                     double epsilon) {
  const int L = cfg.blocks;
  const auto [lo, hi] = bs_band_L(cfg, j / L, j % L);
  (void)lo;
  const double beff = hi - kBandBackoff;
  LayerAllocation alloc = equalized_ladder(beff, cfg, j / L, j % L, n_layers, epsilon);
  alloc.flat_band = true;
  return alloc;
}

}  // namespace

LayerAllocation bs_allocation_auto(double b, const ChannelConfig& cfg, int n_layers,
                                   double epsilon) {
  if (!(b > 0.0)) throw std::domain_error("bandwidth ratio must be positive");
  const int m = cfg.min_ant();
  const int L = cfg.blocks;
  for (int j = m * L - 1; j >= 0; --j) {
    const int k = j / L, a = j % L;
    const auto [lo, hi] = bs_band_L(cfg, k, a);
    if (b <= lo) {
      // Flat gap between this band and the one below it: build at the edge of
      // the band below and leave the extra bandwidth unused.
      return flat_edge_allocation(cfg, j + 1, n_layers, epsilon);
    }
    if (b < hi) {
      return cfg.blocks == 1 ? bs_allocation(b, cfg, k, n_layers, epsilon)
                             : bs_allocation_L(b, cfg, k, a, n_layers, epsilon);
    }
  }
  // Beyond the top band: saturation region, build at the top band's edge.
  return flat_edge_allocation(cfg, 0, n_layers, epsilon);
}

double bs_finite_closed_form(double b, const ChannelConfig& cfg, int k, int n_layers) {
  if (cfg.blocks != 1) {
    throw std::domain_error("closed form requires L = 1");
  }
  if (n_layers < 1) throw std::domain_error("closed form needs at least one layer");
  const auto [lo, hi] = bs_band(cfg, k);
  if (!(b > lo && b < hi)) {
    throw std::domain_error("b outside the open allocation band for this k");
  }
  const double M = cfg.tx_antennas, N = cfg.rx_antennas;
  const double alpha = alpha_single_block(b, cfg, k);
  const double an = std::pow(alpha, n_layers);
  const double mn = (M - k) * (N - k);
  return b * (k + 1) * mn * (1.0 - an) / (mn - b * (k + 1) * an);
}

SchemeExponent bs_limit_exponent(double b, const ChannelConfig& cfg) {
  if (cfg.blocks != 1) {
    throw std::domain_error("single-block limit requires L = 1; use bs_limit_exponent_L");
  }
  if (!(b > 0.0)) throw std::domain_error("bandwidth ratio must be positive");
  const double M = cfg.tx_antennas, N = cfg.rx_antennas;
  const int m = cfg.min_ant();
  SchemeExponent out;
  out.scheme = SchemeId::bs_limit;
  out.b = b;
  for (int k = m - 1; k >= 0; --k) {
    const double lo = (M - k - 1) * (N - k - 1) / (k + 1.0);
    const double hi = (M - k) * (N - k) / (k + 1.0);
    if (b <= lo) {
      out.exponent = (M - k - 1) * (N - k - 1);
      out.arg_k = k + 1;
      return out;
    }
    if (b < hi) {
      out.exponent = (k + 1) * b;
      out.arg_k = k;
      return out;
    }
  }
  out.exponent = M * N;
  out.arg_k = 0;
  return out;
}

SchemeExponent bs_limit_exponent_L(double b, const ChannelConfig& cfg) {
  if (!(b > 0.0)) throw std::domain_error("bandwidth ratio must be positive");
  const double M = cfg.tx_antennas, N = cfg.rx_antennas;
  const int m = cfg.min_ant();
  const int L = cfg.blocks;
  SchemeExponent out;
  out.scheme = SchemeId::bs_limit;
  out.b = b;
  for (int j = m * L - 1; j >= 0; --j) {
    const int k = j / L, a = j % L;
    const auto [lo, hi] = bs_band_L(cfg, k, a);
    if (b <= lo) {
      const int kn = (j + 1) / L, an = (j + 1) % L;
      out.exponent = L * (M - kn) * (N - kn) - an * (M + N - 1 - 2.0 * kn);
      out.arg_k = kn;
      out.arg_a = an;
      return out;
    }
    if (b < hi) {
      out.exponent = b * (j + 1) / L;
      out.arg_k = k;
      out.arg_a = a;
      return out;
    }
  }
  out.exponent = static_cast<double>(M) * N * L;
  out.arg_k = 0;
  out.arg_a = 0;
  return out;
}

std::vector<double> bs_layer_exponents(const LayerAllocation& alloc, double b,
                                       const ChannelConfig& cfg) {
  const std::size_t ns = alloc.gammas.size();
  if (alloc.rates.size() != ns || ns == 0) {
    throw std::domain_error("allocation must have matching layer counts");
  }
  std::vector<double> out(ns + 1);
  double prev = 1.0;
  double cum = 0.0;
  for (std::size_t i = 0; i < ns; ++i) {
    out[i] = b * cum + layer_diversity_L(alloc.rates[i], prev, alloc.gammas[i], cfg);
    cum += alloc.rates[i];
    prev = alloc.gammas[i];
  }
  out[ns] = b * cum;
  return out;
}

namespace {

// Linear program for a fixed k-vector: variables [a, gamma_1.., delta_1..],
// maximize the worst-layer exponent a.
LpSolution solve_fixed_k(double b, const ChannelConfig& cfg, const std::vector<int>& kv) {
  const int ns = static_cast<int>(kv.size());
  const double M = cfg.tx_antennas, N = cfg.rx_antennas;
  const int nvar = 1 + 2 * ns;
  const auto g_idx = [&](int i) { return i; };           // gamma_i, i in 1..ns
  const auto d_idx = [&](int i) { return ns + i; };      // delta_i

  LinearProgram lp;
  lp.objective.assign(nvar, 0.0);
  lp.objective[0] = 1.0;
  lp.lower.assign(nvar, 0.0);
  lp.upper.assign(nvar, 1.0);
  lp.upper[0] = M * N;

  // Power ordering and rate-gap constraints.
  for (int i = 1; i <= ns; ++i) {
    std::vector<double> row(nvar, 0.0);
    row[g_idx(i)] = 1.0;
    if (i > 1) row[g_idx(i - 1)] = -1.0;
    lp.add_constraint(std::move(row), i > 1 ? -kStrictSlack : 1.0 - kStrictSlack);

    std::vector<double> gap(nvar, 0.0);
    gap[d_idx(i)] = 1.0;
    gap[g_idx(i)] = 1.0;
    if (i > 1) gap[g_idx(i - 1)] = -1.0;
    lp.add_constraint(std::move(gap), i > 1 ? -kStrictSlack : 1.0 - kStrictSlack);
  }

  // Cumulative rate sum_{j<i} r_j as an affine expression in the variables.
  std::vector<double> cum_coef(nvar, 0.0);
  double cum_const = 0.0;
  for (int i = 1; i <= ns; ++i) {
    const int ki = kv[i - 1];
    std::vector<double> row(nvar, 0.0);
    row[0] = 1.0;
    for (int v = 0; v < nvar; ++v) row[v] -= b * cum_coef[v];
    double rhs = b * cum_const;
    if (i == 1) {
      rhs += (M - ki) * (N - ki);  // gamma_0 = 1
    } else {
      row[g_idx(i - 1)] -= (M - ki) * (N - ki);
    }
    row[d_idx(i)] += M + N - 1 - 2.0 * ki;
    lp.add_constraint(std::move(row), rhs);

    // r_i = k_i*(gamma_{i-1} - gamma_i) + delta_i
    if (i == 1) {
      cum_const += ki;
    } else {
      cum_coef[g_idx(i - 1)] += ki;
    }
    cum_coef[g_idx(i)] -= ki;
    cum_coef[d_idx(i)] += 1.0;
  }
  std::vector<double> last(nvar, 0.0);
  last[0] = 1.0;
  for (int v = 0; v < nvar; ++v) last[v] -= b * cum_coef[v];
  lp.add_constraint(std::move(last), b * cum_const);

  return solve(lp);
}

}  // namespace

SchemeExponent bs_finite_optimal(double b, const ChannelConfig& cfg, int n_layers) {
  if (cfg.blocks != 1) throw std::domain_error("finite-layer optimizer requires L = 1");
  if (n_layers < 1 || n_layers > 8) {
    throw std::domain_error("finite-layer optimizer supports 1..8 layers");
  }
  if (!(b > 0.0)) throw std::domain_error("bandwidth ratio must be positive");
  const int m = cfg.min_ant();

  SchemeExponent out;
  out.scheme = SchemeId::bs_finite;
  out.b = b;
  out.exponent = 0.0;

  for (int ns = 1; ns <= n_layers; ++ns) {
    std::vector<int> kv(ns, 0);
    while (true) {
      const LpSolution sol = solve_fixed_k(b, cfg, kv);
      if (sol.status == LpStatus::optimal && sol.value > out.exponent) {
        out.exponent = sol.value;
        LayerAllocation alloc;
        alloc.k_target = kv[0];
        alloc.epsilon = 0.0;
        alloc.effective_b = b;
        alloc.gammas.resize(ns);
        alloc.rates.resize(ns);
        double prev = 1.0;
        for (int i = 0; i < ns; ++i) {
          alloc.gammas[i] = sol.x[1 + i];
          alloc.rates[i] = kv[i] * (prev - alloc.gammas[i]) + sol.x[1 + ns + i];
          prev = alloc.gammas[i];
        }
        out.allocation = std::move(alloc);
        out.arg_k = kv[0];
      }
      int pos = 0;
      while (pos < ns && ++kv[pos] == m) kv[pos++] = 0;
      if (pos == ns) break;
    }
  }
  return out;
}

double bs_upper_envelope(double b, const ChannelConfig& cfg) {
  if (cfg.blocks != 1) throw std::domain_error("envelope requires L = 1");
  if (!(b > 0.0)) throw std::domain_error("bandwidth ratio must be positive");
  const double M = cfg.tx_antennas, N = cfg.rx_antennas;
  const int m = cfg.min_ant();
  double bound = M * N;
  for (int k = 1; k <= m; ++k) {
    if (b <= (M - k) * (N - k) / static_cast<double>(k)) {
      bound = std::min(bound, (M - k) * (N - k));
    }
  }
  for (int k = 0; k < m; ++k) {
    if (b > (M - k - 1) * (N - k - 1) / (k + 1.0)) {
      bound = std::min(bound, (k + 1) * b);
    }
  }
  return bound;
}

}  // namespace dse
