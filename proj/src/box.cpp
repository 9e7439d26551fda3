#include "dse/box.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "dse/linprog.hpp"

namespace dse {

namespace {

// Relative backoff on greedy cell rates: keeps the stored rate strictly
// inside its decomposition band so the grid re-evaluates at (or above) the
// target it was built for.
constexpr double kRateBackoff = 1e-9;
// Strictness slack for the brute-force linear programs; kept well below the
// greedy/oracle comparison tolerance.
constexpr double kBoxLpSlack = 1e-9;
constexpr double kSkipEps = 1e-15;

void check_box_args(double b, const ChannelConfig& cfg, int n_super, int n_time) {
  if (cfg.blocks != 1) throw std::domain_error("box scheme requires L = 1");
  if (!(b > 0.0)) throw std::domain_error("bandwidth ratio must be positive");
  if (n_super < 1 || n_time < 1) throw std::domain_error("grid needs n_super, n_time >= 1");
}

struct CellAlloc {
  bool skip = false;
  int k = 0;
  double delta = 0.0;
  double gamma_cur = 0.0;
  double rate = 0.0;
};

CellAlloc allocate_cell(double d, double rbar, double gp, bool last_row,
                        const ChannelConfig& cfg) {
  const double M = cfg.tx_antennas, N = cfg.rx_antennas;
  const int m = cfg.min_ant();
  CellAlloc cell;
  if (M * N * gp + rbar < d) {
    cell.skip = true;
    cell.gamma_cur = gp;
    return cell;
  }
  int k = -1;
  double delta = 0.0;
  for (int kk = 0; kk < m; ++kk) {
    const double dk = ((M - kk) * (N - kk) * gp + rbar - d) / (M + N - 1 - 2.0 * kk);
    if (dk < 0.0) break;  // no band can be equalized; nothing to allocate
    if (dk < gp) {
      k = kk;
      delta = dk;
      break;
    }
    if (kk == m - 1) {
      // The running rate already covers the target; cap the cell at full rate.
      k = m - 1;
      delta = gp * (1.0 - kRateBackoff);
    }
  }
  if (k < 0) {
    cell.skip = true;
    cell.gamma_cur = gp;
    return cell;
  }
  cell.k = k;
  cell.delta = delta;
  if (last_row) {
    cell.gamma_cur = 0.0;
    cell.rate = k * gp + delta;
  } else {
    cell.gamma_cur = gp - delta;
    cell.rate = (k + 1) * delta * (1.0 - kRateBackoff);
  }
  return cell;
}

int pick_column(FillOrder order, const std::vector<int>& depth, const std::vector<double>& avail,
                int n_super) {
  const int nt = static_cast<int>(depth.size());
  if (order == FillOrder::sequential) {
    int best = -1;
    for (int j = 0; j < nt; ++j) {
      if (depth[j] >= n_super) continue;
      if (best < 0 || depth[j] < depth[best]) best = j;
    }
    return best;
  }
  int best = -1;
  for (int j = 0; j < nt; ++j) {
    if (depth[j] >= n_super) continue;
    if (best < 0 || avail[j] > avail[best]) best = j;
  }
  return best;
}

}  // namespace

BoxGrid box_build_grid(std::vector<std::vector<double>> gamma,
                       std::vector<std::vector<double>> rate, double b, const ChannelConfig& cfg,
                       FillOrder order) {
  const int ns = static_cast<int>(gamma.size());
  if (ns == 0 || rate.size() != gamma.size()) {
    throw std::domain_error("grid matrices must be non-empty and congruent");
  }
  const int nt = static_cast<int>(gamma[0].size());
  check_box_args(b, cfg, ns, nt);
  BoxGrid g;
  g.n_super = ns;
  g.n_time = nt;
  g.gamma = std::move(gamma);
  g.rate = std::move(rate);
  g.order = order;
  g.b = b;
  g.m_tx = cfg.tx_antennas;
  g.n_rx = cfg.rx_antennas;
  double rbar = 0.0;
  g.cum_rate.push_back(0.0);
  for (int i = 0; i < ns; ++i) {
    if (static_cast<int>(g.gamma[i].size()) != nt || static_cast<int>(g.rate[i].size()) != nt) {
      throw std::domain_error("grid matrices must be rectangular");
    }
    for (int j = 0; j < nt; ++j) {
      g.visit.emplace_back(i, j);
      rbar += b / nt * g.rate[i][j];
      g.cum_rate.push_back(rbar);
    }
  }
  return g;
}

double box_grid_exponent(const BoxGrid& grid, double b, const ChannelConfig& cfg) {
  check_box_args(b, cfg, grid.n_super, grid.n_time);
  if (static_cast<int>(grid.visit.size()) != grid.n_super * grid.n_time) {
    throw std::domain_error("grid visit order must cover every cell");
  }
  double rbar = 0.0;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& [i, j] : grid.visit) {
    const double gp = i == 0 ? 1.0 : grid.gamma[i - 1][j];
    const double gc = grid.gamma[i][j];
    const double r = grid.rate[i][j];
    if (gp - gc <= kSkipEps) {
      if (r > kSkipEps) throw std::domain_error("skipped cell carries non-zero rate");
      // never in outage; contributes nothing to the minimum
    } else {
      worst = std::min(worst, layer_diversity(r, gp, gc, cfg) + rbar);
    }
    rbar += b / grid.n_time * r;
  }
  return std::min(worst, rbar);
}

BoxFeasibility box_is_achievable(double d, double b, const ChannelConfig& cfg, int n_super,
                                 int n_time, FillOrder order) {
  check_box_args(b, cfg, n_super, n_time);
  if (d < 0.0) throw std::domain_error("target exponent must be non-negative");

  BoxFeasibility out;
  BoxGrid& g = out.grid;
  g.n_super = n_super;
  g.n_time = n_time;
  g.gamma.assign(n_super, std::vector<double>(n_time, 0.0));
  g.rate.assign(n_super, std::vector<double>(n_time, 0.0));
  g.order = order;
  g.b = b;
  g.m_tx = cfg.tx_antennas;
  g.n_rx = cfg.rx_antennas;
  g.cum_rate.push_back(0.0);

  std::vector<int> depth(n_time, 0);
  std::vector<double> avail(n_time, 1.0);
  double rbar = 0.0;
  const int total = n_super * n_time;
  for (int step = 0; step < total; ++step) {
    const int j = pick_column(order, depth, avail, n_super);
    const int i = depth[j];
    if (out.achievable) {
      // Already succeeded; remaining cells stay unallocated.
      g.gamma[i][j] = avail[j];
      g.rate[i][j] = 0.0;
    } else {
      const CellAlloc cell = allocate_cell(d, rbar, avail[j], i == n_super - 1, cfg);
      g.gamma[i][j] = cell.gamma_cur;
      g.rate[i][j] = cell.skip ? 0.0 : cell.rate;
      rbar += b / n_time * g.rate[i][j];
      if (rbar > d) out.achievable = true;
    }
    g.visit.emplace_back(i, j);
    g.cum_rate.push_back(rbar);
    avail[j] = g.gamma[i][j];
    ++depth[j];
  }
  return out;
}

SchemeExponent box_max_exponent(double b, const ChannelConfig& cfg, int n_super, int n_time,
                                FillOrder order, double tol) {
  check_box_args(b, cfg, n_super, n_time);
  if (!(tol > 0.0)) throw std::domain_error("search tolerance must be positive");
  const double cap = static_cast<double>(cfg.tx_antennas) * cfg.rx_antennas;

  SchemeExponent out;
  out.scheme = SchemeId::box_greedy;
  out.b = b;

  // Coarse scan; achievability under the greedy need not be monotone in d.
  const double step = cap / 64.0;
  double lo = -1.0;
  double hi = cap;
  BoxGrid best_grid;
  for (int i = 0; i <= 64; ++i) {
    const double d = std::min(i * step, cap);
    BoxFeasibility f = box_is_achievable(d, b, cfg, n_super, n_time, order);
    out.probes.emplace_back(d, f.achievable);
    if (f.achievable) {
      lo = d;
      hi = std::min(d + step, cap);
      best_grid = std::move(f.grid);
    }
  }
  if (lo < 0.0) {
    out.exponent = 0.0;
    return out;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    BoxFeasibility f = box_is_achievable(mid, b, cfg, n_super, n_time, order);
    out.probes.emplace_back(mid, f.achievable);
    if (f.achievable) {
      lo = mid;
      best_grid = std::move(f.grid);
    } else {
      hi = mid;
    }
  }
  out.exponent = lo;
  out.grid = std::move(best_grid);
  return out;
}

SchemeExponent box_bruteforce_small(double b, const ChannelConfig& cfg, int n_super, int n_time) {
  check_box_args(b, cfg, n_super, n_time);
  const int cells = n_super * n_time;
  if (cells > 6) throw std::domain_error("brute force budget: n_super*n_time must be <= 6");
  const int m = cfg.min_ant();
  const double M = cfg.tx_antennas, N = cfg.rx_antennas;

  SchemeExponent out;
  out.scheme = SchemeId::box_bruteforce;
  out.b = b;
  out.exponent = 0.0;

  // choice[c] = -1 for skip, otherwise the cell's integer band.
  std::vector<int> choice(cells, -1);
  while (true) {
    int nvar = 1;
    std::vector<int> gvar(cells, -1), dvar(cells, -1);
    for (int c = 0; c < cells; ++c) {
      if (choice[c] < 0) continue;
      gvar[c] = nvar++;
      dvar[c] = nvar++;
    }
    LinearProgram lp;
    lp.objective.assign(nvar, 0.0);
    lp.objective[0] = 1.0;
    lp.lower.assign(nvar, 0.0);
    lp.upper.assign(nvar, 1.0);
    lp.upper[0] = M * N;

    std::vector<double> cum(nvar, 0.0);
    double cum_const = 0.0;
    // Chain of the most recent non-skipped gamma per column (-1 = top, gamma 1).
    std::vector<int> chain(n_time, -1);
    for (int c = 0; c < cells; ++c) {
      const int j = c % n_time;
      if (choice[c] < 0) continue;
      const int k = choice[c];
      const int prev = chain[j];

      std::vector<double> dec(nvar, 0.0);
      dec[gvar[c]] = 1.0;
      if (prev >= 0) dec[gvar[prev]] = -1.0;
      lp.add_constraint(std::move(dec), prev >= 0 ? -kBoxLpSlack : 1.0 - kBoxLpSlack);

      std::vector<double> gap(nvar, 0.0);
      gap[dvar[c]] = 1.0;
      gap[gvar[c]] = 1.0;
      if (prev >= 0) gap[gvar[prev]] = -1.0;
      lp.add_constraint(std::move(gap), prev >= 0 ? -kBoxLpSlack : 1.0 - kBoxLpSlack);

      std::vector<double> row(nvar, 0.0);
      row[0] = 1.0;
      for (int v = 0; v < nvar; ++v) row[v] -= b / n_time * cum[v];
      double rhs = b / n_time * cum_const;
      if (prev >= 0) {
        row[gvar[prev]] -= (M - k) * (N - k);
      } else {
        rhs += (M - k) * (N - k);
      }
      row[dvar[c]] += M + N - 1 - 2.0 * k;
      lp.add_constraint(std::move(row), rhs);

      if (prev >= 0) {
        cum[gvar[prev]] += k;
      } else {
        cum_const += k;
      }
      cum[gvar[c]] -= k;
      cum[dvar[c]] += 1.0;
      chain[j] = c;
    }
    std::vector<double> last(nvar, 0.0);
    last[0] = 1.0;
    for (int v = 0; v < nvar; ++v) last[v] -= b / n_time * cum[v];
    lp.add_constraint(std::move(last), b / n_time * cum_const);

    const LpSolution sol = solve(lp);
    if (sol.status == LpStatus::optimal && sol.value > out.exponent) {
      out.exponent = sol.value;
      std::vector<std::vector<double>> gm(n_super, std::vector<double>(n_time, 0.0));
      std::vector<std::vector<double>> rt(n_super, std::vector<double>(n_time, 0.0));
      std::vector<double> top(n_time, 1.0);
      for (int c = 0; c < cells; ++c) {
        const int i = c / n_time, j = c % n_time;
        if (choice[c] < 0) {
          gm[i][j] = top[j];
        } else {
          gm[i][j] = sol.x[gvar[c]];
          rt[i][j] = choice[c] * (top[j] - gm[i][j]) + sol.x[dvar[c]];
          top[j] = gm[i][j];
        }
      }
      out.grid = box_build_grid(std::move(gm), std::move(rt), b, cfg);
    }

    int pos = 0;
    while (pos < cells && ++choice[pos] == m) choice[pos++] = -1;
    if (pos == cells) break;
  }
  return out;
}

std::string box_grid_to_json(const BoxGrid& grid) {
  nlohmann::json j;
  j["nt"] = grid.n_time;
  j["ns"] = grid.n_super;
  j["gamma"] = grid.gamma;
  j["rate"] = grid.rate;
  j["cum_rate"] = grid.cum_rate;
  j["order"] = to_string(grid.order);
  j["b"] = grid.b;
  j["m_tx"] = grid.m_tx;
  j["n_rx"] = grid.n_rx;
  return j.dump();
}

}  // namespace dse
