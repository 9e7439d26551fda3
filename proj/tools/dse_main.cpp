#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dse/box.hpp"
#include "dse/broadcast.hpp"
#include "dse/channel.hpp"
#include "dse/lsblend.hpp"
#include "dse/montecarlo.hpp"
#include "dse/parallel.hpp"

using nlohmann::json;

namespace {

struct SchemeOptions {
  int k = -1;
  int a = -1;
  int ns = -1;
  int nt = -1;
  std::string order = "sequential";
  double epsilon = 1e-6;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

dse::FillOrder parse_order(const std::string& order) {
  if (order == "sequential") return dse::FillOrder::sequential;
  if (order == "max-power" || order == "max_available_power") {
    return dse::FillOrder::max_available_power;
  }
  throw std::domain_error("unknown fill order: " + order);
}

int effective_ns(const SchemeOptions& o, int fallback) { return o.ns > 0 ? o.ns : fallback; }

dse::SchemeExponent eval_scheme(const std::string& scheme, double b, const dse::ChannelConfig& cfg,
                                const SchemeOptions& o) {
  if (scheme == "it-bound") {
    dse::SchemeExponent out;
    out.scheme = dse::SchemeId::it_bound;
    out.b = b;
    out.exponent = dse::informed_transmitter_bound(b, cfg);
    return out;
  }
  if (scheme == "bs") {
    return cfg.blocks == 1 ? dse::bs_limit_exponent(b, cfg) : dse::bs_limit_exponent_L(b, cfg);
  }
  if (scheme == "bs-finite") {
    return dse::bs_finite_optimal(b, cfg, effective_ns(o, 6));
  }
  if (scheme == "ls") {
    if (cfg.blocks == 1) return dse::lsblend_exponent(b, cfg, cfg.min_ant());
    return dse::lsblend_exponent_L(b, cfg, cfg.min_ant(), 0);
  }
  if (scheme == "lsblend") {
    if (cfg.blocks != 1) {
      if (o.k < 0 || o.a < 0) {
        throw std::domain_error("lsblend with L > 1 requires explicit --k and --a");
      }
      return dse::lsblend_exponent_L(b, cfg, o.k, o.a);
    }
    if (o.k >= 0) return dse::lsblend_exponent(b, cfg, o.k);
    return dse::lsblend_best(b, cfg);
  }
  if (scheme == "box") {
    return dse::box_max_exponent(b, cfg, effective_ns(o, 16), o.nt > 0 ? o.nt : 16,
                                 parse_order(o.order));
  }
  if (scheme == "box-bruteforce") {
    return dse::box_bruteforce_small(b, cfg, effective_ns(o, 2), o.nt > 0 ? o.nt : 2);
  }
  throw std::domain_error("unknown scheme: " + scheme);
}

json scheme_params(const std::string& scheme, const SchemeOptions& o) {
  json p = json::object();
  if (o.k >= 0) p["k"] = o.k;
  if (o.a >= 0) p["a"] = o.a;
  if (scheme == "bs-finite") p["ns"] = effective_ns(o, 6);
  if (scheme == "box") {
    p["ns"] = effective_ns(o, 16);
    p["nt"] = o.nt > 0 ? o.nt : 16;
    p["order"] = o.order;
  }
  if (scheme == "box-bruteforce") {
    p["ns"] = effective_ns(o, 2);
    p["nt"] = o.nt > 0 ? o.nt : 2;
  }
  p["epsilon"] = o.epsilon;
  return p;
}

std::vector<double> make_grid(double b_min, double b_max, int points, bool linear) {
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    grid[i] = linear ? b_min + t * (b_max - b_min) : b_min * std::pow(b_max / b_min, t);
  }
  return grid;
}

std::vector<double> parse_db_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

int run_exponent(const std::string& scheme, const dse::ChannelConfig& cfg, double b,
                 const SchemeOptions& o, bool as_json) {
  const dse::SchemeExponent v = eval_scheme(scheme, b, cfg, o);
  if (as_json) {
    json j;
    j["scheme"] = scheme;
    j["m_tx"] = cfg.tx_antennas;
    j["n_rx"] = cfg.rx_antennas;
    j["blocks"] = cfg.blocks;
    j["b"] = b;
    j["exponent"] = v.exponent;
    j["params"] = scheme_params(scheme, o);
    if (v.arg_k >= 0) j["params"]["arg_k"] = v.arg_k;
    if (v.arg_a >= 0) j["params"]["arg_a"] = v.arg_a;
    if (v.grid) j["grid"] = json::parse(dse::box_grid_to_json(*v.grid));
    std::printf("%s\n", j.dump().c_str());
  } else {
    std::printf("%.6f\n", v.exponent);
  }
  return 0;
}

int run_sweep(const std::string& scheme, const dse::ChannelConfig& cfg, double b_min, double b_max,
              int points, bool linear, const std::string& out_path, bool as_json,
              const SchemeOptions& o) {
  if (!(b_min > 0.0) || !(b_max > b_min)) {
    throw std::domain_error("sweep requires 0 < b-min < b-max");
  }
  std::vector<std::string> schemes;
  if (scheme == "all") {
    schemes = {"it-bound", "bs", "ls", "lsblend", "box"};
  } else {
    schemes = {scheme};
  }
  const std::vector<double> grid = make_grid(b_min, b_max, points, linear);

  struct Row {
    double b;
    double exponent;
    const std::string* scheme;
  };
  std::vector<Row> rows(schemes.size() * grid.size());
  dse::parallel_for(rows.size(), [&](std::size_t idx) {
    const std::size_t si = idx / grid.size();
    const std::size_t bi = idx % grid.size();
    const dse::SchemeExponent v = eval_scheme(schemes[si], grid[bi], cfg, o);
    rows[idx] = {grid[bi], v.exponent, &schemes[si]};
  });

  std::ostringstream body;
  if (as_json) {
    json arr = json::array();
    for (const Row& r : rows) {
      arr.push_back({{"b", r.b},
                     {"exponent", r.exponent},
                     {"scheme", *r.scheme},
                     {"m_tx", cfg.tx_antennas},
                     {"n_rx", cfg.rx_antennas},
                     {"blocks", cfg.blocks}});
    }
    body << arr.dump(2) << "\n";
  } else {
    body << "b,exponent,scheme,m_tx,n_rx,blocks\n";
    for (const Row& r : rows) {
      body << fmt(r.b) << ',' << fmt(r.exponent) << ',' << *r.scheme << ','
           << cfg.tx_antennas << ',' << cfg.rx_antennas << ',' << cfg.blocks << "\n";
    }
  }
  if (out_path.empty() || out_path == "-") {
    std::fputs(body.str().c_str(), stdout);
    return 0;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
    return 1;
  }
  f << body.str();
  return 0;
}

int run_allocation(const dse::ChannelConfig& cfg, double b, const SchemeOptions& o,
                   const std::string& out_path) {
  const int ns = effective_ns(o, 16);
  dse::LayerAllocation alloc;
  if (o.k >= 0) {
    alloc = cfg.blocks == 1 ? dse::bs_allocation(b, cfg, o.k, ns, o.epsilon)
                            : dse::bs_allocation_L(b, cfg, o.k, o.a < 0 ? 0 : o.a, ns, o.epsilon);
  } else {
    alloc = dse::bs_allocation_auto(b, cfg, ns, o.epsilon);
  }
  json j;
  j["scheme"] = "bs";
  j["m_tx"] = cfg.tx_antennas;
  j["n_rx"] = cfg.rx_antennas;
  j["blocks"] = cfg.blocks;
  j["b"] = b;
  j["gammas"] = alloc.gammas;
  j["rates"] = alloc.rates;
  j["per_layer_exponents"] = dse::bs_layer_exponents(alloc, b, cfg);
  j["epsilon"] = alloc.epsilon;
  j["k"] = alloc.k_target;
  j["a"] = alloc.a_target;
  j["flat_band"] = alloc.flat_band;
  j["effective_b"] = alloc.effective_b;
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty() || out_path == "-") {
    std::fputs(text.c_str(), stdout);
    return 0;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
    return 1;
  }
  f << text;
  return 0;
}

int run_montecarlo(const std::string& target, const dse::ChannelConfig& cfg, double b, double r,
                   double gamma_prev, double gamma_cur, const std::string& snr_csv,
                   std::uint64_t trials, std::uint64_t seed, const SchemeOptions& o,
                   const std::string& out_path) {
  dse::SimPlan plan;
  plan.trials = trials;
  plan.seed = seed;
  plan.snr_grid_db = parse_db_list(snr_csv);
  if (plan.snr_grid_db.size() < 3) {
    throw std::domain_error("montecarlo needs at least three --snr-db points");
  }
  for (std::size_t i = 1; i < plan.snr_grid_db.size(); ++i) {
    if (plan.snr_grid_db[i] <= plan.snr_grid_db[i - 1]) {
      throw std::domain_error("--snr-db list must be strictly increasing");
    }
  }

  std::optional<dse::LayerAllocation> alloc;
  if (target == "distortion") {
    alloc = dse::bs_allocation_auto(b, cfg, effective_ns(o, 6), o.epsilon);
  } else if (target != "outage") {
    throw std::domain_error("unknown montecarlo target: " + target);
  }

  std::vector<dse::Estimate> estimates(plan.snr_grid_db.size());
  for (std::size_t i = 0; i < plan.snr_grid_db.size(); ++i) {
    const double db = plan.snr_grid_db[i];
    estimates[i] = alloc ? dse::scheme_distortion(*alloc, b, db, cfg, plan)
                         : dse::layer_outage_prob(r, gamma_prev, gamma_cur, db, cfg, plan);
  }

  std::ostringstream body;
  body << "snr_db,estimate,stderr,trials,seed\n";
  std::vector<std::pair<double, double>> resolved;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    body << fmt(plan.snr_grid_db[i]) << ',' << fmt(estimates[i].value) << ','
         << fmt(estimates[i].std_error) << ',' << trials << ',' << seed << "\n";
    if (estimates[i].value * trials >= dse::kMinResolvedCount) {
      resolved.emplace_back(plan.snr_grid_db[i], estimates[i].value);
    }
  }
  if (resolved.size() < 3) {
    std::fprintf(stderr, "error: slope fit unresolved (fewer than 3 points above %g/trials)\n",
                 dse::kMinResolvedCount);
    return 2;
  }
  const dse::SlopeEstimate fit = dse::fit_slope(resolved);
  body << "# slope=" << fmt(fit.slope) << " stderr=" << fmt(fit.std_error) << "\n";

  if (out_path.empty() || out_path == "-") {
    std::fputs(body.str().c_str(), stdout);
    return 0;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
    return 1;
  }
  f << body.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distortion-SNR exponents of layered MIMO transmission schemes"};
  app.require_subcommand(1);

  int m_tx = 1, n_rx = 1, blocks = 1;
  double b = 1.0;
  std::string scheme = "bs";
  SchemeOptions opts;
  bool as_json = false, as_csv = false, linear = false;

  auto add_cfg = [&](CLI::App* cmd) {
    cmd->add_option("--m", m_tx, "transmit antennas")->required();
    cmd->add_option("--n", n_rx, "receive antennas")->required();
    cmd->add_option("--l", blocks, "fading blocks per codeword")->default_val(1);
  };
  auto add_scheme_opts = [&](CLI::App* cmd) {
    cmd->add_option("--k", opts.k, "target band index");
    cmd->add_option("--a", opts.a, "target block offset (L > 1)");
    cmd->add_option("--ns", opts.ns, "superposition layers");
    cmd->add_option("--nt", opts.nt, "time layers");
    cmd->add_option("--order", opts.order, "box fill order: sequential|max-power")
        ->default_val("sequential");
    cmd->add_option("--epsilon", opts.epsilon, "rate back-off")->default_val(1e-6);
  };

  auto* c_exp = app.add_subcommand("exponent", "single-point exponent query");
  add_cfg(c_exp);
  add_scheme_opts(c_exp);
  c_exp->add_option("--scheme", scheme, "scheme id")->required();
  c_exp->add_option("--b", b, "bandwidth ratio")->required();
  c_exp->add_flag("--json", as_json, "emit a JSON record");

  double b_min = 0.1, b_max = 10.0;
  int points = 50;
  std::string out_path;
  auto* c_sweep = app.add_subcommand("sweep", "exponent curve over a b grid");
  add_cfg(c_sweep);
  add_scheme_opts(c_sweep);
  c_sweep->add_option("--scheme", scheme, "scheme id or 'all'")->required();
  c_sweep->add_option("--b-min", b_min, "grid start")->required();
  c_sweep->add_option("--b-max", b_max, "grid end")->required();
  c_sweep->add_option("--points", points, "grid size")->default_val(50)
      ->check(CLI::Range(2, 100000));
  c_sweep->add_option("--out", out_path, "output path ('-' for stdout)");
  c_sweep->add_flag("--json", as_json, "JSON array instead of CSV");
  c_sweep->add_flag("--csv", as_csv, "CSV output (default)");
  c_sweep->add_flag("--linear", linear, "linear b grid instead of log-spaced");

  auto* c_alloc = app.add_subcommand("allocation", "power/rate stack dump");
  add_cfg(c_alloc);
  add_scheme_opts(c_alloc);
  c_alloc->add_option("--scheme", scheme, "scheme id (bs)")->default_val("bs");
  c_alloc->add_option("--b", b, "bandwidth ratio")->required();
  c_alloc->add_option("--out", out_path, "output path ('-' for stdout)");

  std::string target = "outage", snr_csv;
  double rate = 0.5, gamma_prev = 1.0, gamma_cur = 0.0;
  std::uint64_t trials = 100000, seed = 0;
  auto* c_mc = app.add_subcommand("montecarlo", "empirical outage/distortion runs");
  add_cfg(c_mc);
  add_scheme_opts(c_mc);
  c_mc->add_option("--target", target, "outage|distortion")->required();
  c_mc->add_option("--b", b, "bandwidth ratio (distortion target)");
  c_mc->add_option("--r", rate, "layer multiplexing rate (outage target)");
  c_mc->add_option("--gamma-prev", gamma_prev, "upper power exponent")->default_val(1.0);
  c_mc->add_option("--gamma-cur", gamma_cur, "lower power exponent")->default_val(0.0);
  c_mc->add_option("--snr-db", snr_csv, "comma list of SNR points in dB")->required();
  c_mc->add_option("--trials", trials, "trials per SNR point")->default_val(100000);
  c_mc->add_option("--seed", seed, "random seed")->default_val(0);
  c_mc->add_option("--out", out_path, "output path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const dse::ChannelConfig cfg(m_tx, n_rx, blocks);
    if (c_exp->parsed()) return run_exponent(scheme, cfg, b, opts, as_json);
    if (c_sweep->parsed()) {
      return run_sweep(scheme, cfg, b_min, b_max, points, linear, out_path, as_json, opts);
    }
    if (c_alloc->parsed()) return run_allocation(cfg, b, opts, out_path);
    if (c_mc->parsed()) {
      return run_montecarlo(target, cfg, b, rate, gamma_prev, gamma_cur, snr_csv, trials, seed,
                            opts, out_path);
    }
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
