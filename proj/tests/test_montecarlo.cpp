#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "dse/box.hpp"
#include "dse/broadcast.hpp"
#include "dse/montecarlo.hpp"

using namespace dse;

namespace {

// Independent oracle for the SISO full-span outage at finite SNR.
double siso_outage_closed_form(double r, double snr_db) {
  const double rho = std::pow(10.0, snr_db / 10.0);
  return 1.0 - std::exp(-(std::pow(rho, r) - 1.0) / rho);
}

}  // namespace

TEST_CASE("siso eigenvalue is unit-mean exponential") {
  ChannelConfig cfg(1, 1, 1);
  GaussianRng rng(42);
  double sum = 0.0, count_above = 0.0;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) {
    auto s = sample_channel(cfg, rng);
    sum += s.eigenvalues[0][0];
    if (s.eigenvalues[0][0] > 1.0) count_above += 1.0;
  }
  CHECK(sum / trials > 0.98);
  CHECK(sum / trials < 1.02);
  CHECK(count_above / trials == doctest::Approx(std::exp(-1.0)).epsilon(0.02));
}

TEST_CASE("gram trace matches the antenna product") {
  ChannelConfig cfg(2, 2, 1);
  GaussianRng rng(7);
  double sum = 0.0;
  const int trials = 50000;
  for (int i = 0; i < trials; ++i) {
    auto s = sample_channel(cfg, rng);
    sum += s.eigenvalues[0][0] + s.eigenvalues[0][1];
  }
  CHECK(sum / trials == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("eigenvalues are sorted and reproducible") {
  ChannelConfig cfg(3, 4, 2);
  GaussianRng a(123), b(123);
  for (int i = 0; i < 50; ++i) {
    auto sa = sample_channel(cfg, a);
    auto sb = sample_channel(cfg, b);
    for (int l = 0; l < 2; ++l) {
      REQUIRE(sa.eigenvalues[l].size() == 3);
      for (int j = 0; j < 3; ++j) {
        CHECK(sa.eigenvalues[l][j] == sb.eigenvalues[l][j]);
        if (j) CHECK(sa.eigenvalues[l][j] >= sa.eigenvalues[l][j - 1]);
      }
    }
  }
}

TEST_CASE("siso outage matches the closed form") {
  ChannelConfig cfg(1, 1, 1);
  SimPlan plan;
  plan.trials = 100000;
  plan.seed = 11;
  for (double r : {0.25, 0.5, 0.75}) {
    for (double db : {20.0, 30.0}) {
      auto est = layer_outage_prob(r, 1.0, 0.0, db, cfg, plan);
      const double expect = siso_outage_closed_form(r, db);
      CHECK(std::fabs(est.value - expect) <= 3.0 * est.std_error + 1e-12);
    }
  }
}

TEST_CASE("zero rate never falls in outage") {
  ChannelConfig cfg(2, 2, 1);
  SimPlan plan;
  plan.trials = 20000;
  plan.seed = 3;
  CHECK(layer_outage_prob(0.0, 1.0, 0.0, 20.0, cfg, plan).value == 0.0);
}

TEST_CASE("outage slope approaches the layer diversity") {
  ChannelConfig cfg(1, 1, 1);
  SimPlan plan;
  plan.trials = 100000;
  plan.seed = 5;
  std::vector<std::pair<double, double>> pts;
  for (double db : {20.0, 25.0, 30.0, 35.0, 40.0}) {
    auto est = layer_outage_prob(0.5, 1.0, 0.0, db, cfg, plan);
    if (est.value * plan.trials >= kMinResolvedCount) pts.emplace_back(db, est.value);
  }
  auto fit = fit_slope(pts);
  CHECK(fit.slope > 0.35);
  CHECK(fit.slope < 0.65);
}

TEST_CASE("estimates are identical across worker counts") {
  ChannelConfig cfg(2, 2, 1);
  SimPlan plan;
  plan.trials = 30000;
  plan.seed = 99;
  setenv("DSE_THREADS", "1", 1);
  auto one = layer_outage_prob(1.5, 1.0, 0.0, 25.0, cfg, plan);
  setenv("DSE_THREADS", "4", 1);
  auto four = layer_outage_prob(1.5, 1.0, 0.0, 25.0, cfg, plan);
  unsetenv("DSE_THREADS");
  CHECK(one.value == four.value);
}

TEST_CASE("cascade failure probability is bounded by the genie outage") {
  ChannelConfig cfg(1, 1, 1);
  const double b = 0.5;
  auto alloc = bs_allocation_auto(b, cfg, 3, 1e-6);
  SimPlan plan;
  plan.trials = 200000;
  plan.seed = 21;
  const double snr_db = 25.0;
  const double rho = std::pow(10.0, snr_db / 10.0);
  const double log2rho = std::log2(rho);

  // cascade failure share per layer, measured directly
  GaussianRng rng(shard_seed(plan.seed, 9001));
  std::vector<double> cascade(alloc.gammas.size(), 0.0);
  const int trials = 200000;
  for (int t = 0; t < trials; ++t) {
    auto s = sample_channel(cfg, rng);
    double prev = 1.0;
    for (std::size_t i = 0; i < alloc.gammas.size(); ++i) {
      const double lam = s.eigenvalues[0][0];
      const double mi = std::log2(1.0 + std::pow(rho, prev) * lam) -
                        (alloc.gammas[i] > 0.0
                             ? std::log2(1.0 + std::pow(rho, alloc.gammas[i]) * lam)
                             : 0.0);
      if (mi < alloc.rates[i] * log2rho) {
        cascade[i] += 1.0;
        break;
      }
      prev = alloc.gammas[i];
    }
  }
  double prev = 1.0;
  for (std::size_t i = 0; i < alloc.gammas.size(); ++i) {
    auto genie = layer_outage_prob(alloc.rates[i], prev, alloc.gammas[i], snr_db, cfg, plan);
    CHECK(cascade[i] / trials <= genie.value + 3.0 * genie.std_error + 1e-3);
    prev = alloc.gammas[i];
  }
}

TEST_CASE("zero-rate stack keeps unit distortion") {
  ChannelConfig cfg(2, 2, 1);
  LayerAllocation alloc;
  alloc.gammas = {0.5, 0.0};
  alloc.rates = {0.0, 0.0};
  SimPlan plan;
  plan.trials = 5000;
  plan.seed = 1;
  CHECK(scheme_distortion(alloc, 1.0, 20.0, cfg, plan).value == doctest::Approx(1.0));
}

TEST_CASE("distortion slope of the geometric stack") {
  ChannelConfig cfg(1, 1, 1);
  // A visible rate back-off: the decode margin per layer is about
  // epsilon*log2(rho), which must dominate the O(rho^-gamma) finite-SNR
  // penalty inside the measured window.
  auto alloc = bs_allocation_auto(0.5, cfg, 6, 0.02);
  SimPlan plan;
  plan.trials = 100000;
  plan.seed = 17;
  std::vector<std::pair<double, double>> pts;
  for (double db : {15.0, 20.0, 25.0, 30.0, 35.0, 40.0}) {
    pts.emplace_back(db, scheme_distortion(alloc, 0.5, db, cfg, plan).value);
  }
  auto fit = fit_slope(pts);
  CHECK(fit.slope > 0.35);
  CHECK(fit.slope < 0.65);
}

TEST_CASE("single-cell grid distortion slope matches the cell optimum") {
  ChannelConfig cfg(1, 1, 1);
  const double b = 1.0;
  auto grid = box_build_grid({{0.0}}, {{1.0 / (1.0 + b)}}, b, cfg);
  SimPlan plan;
  plan.trials = 100000;
  plan.seed = 31;
  std::vector<std::pair<double, double>> pts;
  for (double db : {15.0, 20.0, 25.0, 30.0, 35.0, 40.0}) {
    pts.emplace_back(db, scheme_distortion(grid, b, db, cfg, plan).value);
  }
  auto fit = fit_slope(pts);
  CHECK(fit.slope > 0.35);
  CHECK(fit.slope < 0.65);
}

TEST_CASE("slope fit frozen examples") {
  {
    std::vector<std::pair<double, double>> pts;
    for (double db : {10.0, 20.0, 30.0}) pts.emplace_back(db, std::pow(10.0, -2.0 * db / 10.0));
    auto fit = fit_slope(pts);
    CHECK(std::fabs(fit.slope - 2.0) <= 1e-12);
    CHECK(fit.std_error <= 1e-10);
  }
  {
    std::vector<std::pair<double, double>> pts;
    for (double db : {10.0, 17.0, 24.0, 31.0}) {
      pts.emplace_back(db, 7.3 * std::pow(10.0, -1.5 * db / 10.0));
    }
    auto fit = fit_slope(pts);
    CHECK(fit.slope == doctest::Approx(1.5).epsilon(1e-12));
  }
  CHECK_THROWS_AS(fit_slope({{10.0, 0.1}, {20.0, 0.0}, {30.0, 0.01}}), std::domain_error);
  CHECK_THROWS_AS(fit_slope({{10.0, 0.1}, {20.0, 0.01}}), std::domain_error);
}

TEST_CASE("closed-form oracle curve fits inside the expected slope band") {
  std::vector<std::pair<double, double>> pts;
  for (double db = 20.0; db <= 40.0; db += 5.0) {
    pts.emplace_back(db, siso_outage_closed_form(0.5, db));
  }
  auto fit = fit_slope(pts);
  CHECK(fit.slope >= 0.40);
  CHECK(fit.slope <= 0.55);
}
