#include "dse/lsblend.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace dse {

namespace {

// Bandwidth cost of walking the terminal rate through integer band j; the
// j = 0 entry is infinite, so the downward scan always terminates.
double band_cost(const ChannelConfig& cfg, int j) {
  if (j == 0) return std::numeric_limits<double>::infinity();
  const double m = cfg.min_ant(), n = cfg.max_ant(), L = cfg.blocks;
  const int k = j / cfg.blocks;
  return L * (m + n - 1 - 2.0 * k) * std::log((j + 1.0) / j);
}

[[noreturn]] void throw_split_error(double b_split) {
  char msg[96];
  std::snprintf(msg, sizeof(msg), "b must exceed b_k = %g", b_split);
  throw std::domain_error(msg);
}

}  // namespace

double lsblend_bandwidth_split(const ChannelConfig& cfg, int k) {
  if (cfg.blocks != 1) throw std::domain_error("single-block split requires L = 1");
  if (k < 1 || k > cfg.min_ant()) throw std::domain_error("split parameter k must lie in {1..m}");
  const double m = cfg.min_ant(), n = cfg.max_ant();
  return (m - k) * (n - k) / (k + 1.0);
}

double lsblend_bandwidth_split_L(const ChannelConfig& cfg, int k, int a) {
  const int m = cfg.min_ant();
  const int L = cfg.blocks;
  if (a < 0 || a >= L) throw std::domain_error("block offset a must lie in {0..L-1}");
  if (k < 0 || k > m || (k == m && a != 0)) {
    throw std::domain_error("terminal-stack index k*L+a must lie in {1..m*L}");
  }
  const int j = k * L + a;
  if (j < 1) throw std::domain_error("terminal-stack index k*L+a must lie in {1..m*L}");
  const double md = m, nd = cfg.max_ant(), Ld = L;
  return ((md - k) * (nd - k) * Ld * Ld - a * Ld * (md + nd - 1 - 2.0 * k)) / (j + 1.0);
}

SchemeExponent lsblend_exponent(double b, const ChannelConfig& cfg, int k) {
  if (cfg.blocks != 1) throw std::domain_error("single-block form requires L = 1");
  const double bk = lsblend_bandwidth_split(cfg, k);
  if (!(b > bk)) throw_split_error(bk);
  const double m = cfg.min_ant(), n = cfg.max_ant();
  const double x = b - bk;

  int p = k - 1;
  double used = 0.0;  // sum_{j=p+1}^{k-1} of the band costs
  while (p >= 1) {
    const double cp = band_cost(cfg, p);
    if (x < used + cp) break;
    used += cp;
    --p;
  }
  const double w = m + n - 1 - 2.0 * p;
  const double value = m * n - p - p * p - w * (p + 1) * std::exp(-(x - used) / w);

  SchemeExponent out;
  out.scheme = k == cfg.min_ant() ? SchemeId::ls : SchemeId::lsblend;
  out.b = b;
  out.exponent = value;
  out.arg_k = k;
  return out;
}

SchemeExponent lsblend_best(double b, const ChannelConfig& cfg) {
  if (cfg.blocks != 1) throw std::domain_error("single-block form requires L = 1");
  const int m = cfg.min_ant();
  bool found = false;
  SchemeExponent best;
  for (int k = 1; k <= m; ++k) {
    if (!(b > lsblend_bandwidth_split(cfg, k))) continue;
    SchemeExponent cand = lsblend_exponent(b, cfg, k);
    if (!found || cand.exponent > best.exponent) {
      best = cand;
      found = true;
    }
  }
  if (!found) throw std::domain_error("no feasible bandwidth split for this b");
  best.scheme = SchemeId::lsblend;
  return best;
}

SchemeExponent lsblend_exponent_L(double b, const ChannelConfig& cfg, int k, int a) {
  const double bj = lsblend_bandwidth_split_L(cfg, k, a);
  if (!(b > bj)) throw_split_error(bj);
  const int L = cfg.blocks;
  const double m = cfg.min_ant(), n = cfg.max_ant();
  const int j = k * L + a;
  const double x = b - bj;

  int q = j - 1;
  double used = 0.0;
  while (q >= 1) {
    const double cq = band_cost(cfg, q);
    if (x < used + cq) break;
    used += cq;
    --q;
  }
  const int k1 = q / L;
  const int a1 = q % L;
  const double w = m + n - 1 - 2.0 * k1;
  const double r1 = (k1 + (a1 + 1.0) / L) * std::exp(-(x - used) / (L * w));
  const double value = (m - k1) * (n - k1) * L - (r1 - k1) * L * w;

  SchemeExponent out;
  out.scheme = j == cfg.min_ant() * L ? SchemeId::ls : SchemeId::lsblend;
  out.b = b;
  out.exponent = value;
  out.arg_k = k;
  out.arg_a = a;
  return out;
}

std::vector<double> ls_time_layer_rates(double b_time, const ChannelConfig& cfg, int k,
                                        int n_time) {
  if (cfg.blocks != 1) throw std::domain_error("time-layer recursion requires L = 1");
  if (k < 1 || k > cfg.min_ant()) throw std::domain_error("split parameter k must lie in {1..m}");
  if (n_time < 1) throw std::domain_error("need at least one time layer");
  if (!(b_time > 0.0)) throw std::domain_error("time-layer bandwidth must be positive");

  const double m = cfg.min_ant(), n = cfg.max_ant();
  const double beta = b_time / n_time;
  std::vector<double> rates(n_time);
  rates[n_time - 1] = k;
  double d_next = dmt_zheng_tse(k, cfg);
  for (int i = n_time - 1; i >= 1; --i) {
    const double r_cur = rates[i];
    int t = std::min(cfg.min_ant() - 1, static_cast<int>(std::floor(r_cur)));
    double r_prev = 0.0;
    for (; t >= 0; --t) {
      const double w = m + n - 1 - 2.0 * t;
      const double cand = ((m - t) * (n - t) + t * w - d_next) / (w + beta);
      if (cand >= t) {
        r_prev = cand;
        break;
      }
      if (t == 0) r_prev = std::max(cand, 0.0);
    }
    rates[i - 1] = r_prev;
    d_next = dmt_zheng_tse(r_prev, cfg);
  }
  return rates;
}

}  // namespace dse
