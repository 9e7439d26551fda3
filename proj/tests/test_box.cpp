#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "dse/box.hpp"
#include "dse/broadcast.hpp"

using namespace dse;

TEST_CASE("single-cell grid reduces to one layer") {
  ChannelConfig cfg(1, 1, 1);
  const double b = 1.0, r = 0.4;
  auto grid = box_build_grid({{0.0}}, {{r}}, b, cfg);
  CHECK(box_grid_exponent(grid, b, cfg) ==
        doctest::Approx(std::min(dmt_zheng_tse(r, cfg), b * r)).epsilon(1e-12));
}

TEST_CASE("all-zero-rate grid scores zero") {
  ChannelConfig cfg(2, 2, 1);
  auto grid = box_build_grid({{0.5, 0.5}, {0.0, 0.0}}, {{0.0, 0.0}, {0.0, 0.0}}, 2.0, cfg);
  CHECK(box_grid_exponent(grid, 2.0, cfg) == doctest::Approx(0.0));
}

TEST_CASE("embedded superposition stack scores at least the stack") {
  ChannelConfig cfg(3, 4, 1);
  for (double b : {0.4, 2.0}) {
    auto alloc = bs_allocation_auto(b, cfg, 6, 1e-6);
    auto ex = bs_layer_exponents(alloc, b, cfg);
    const double bs_value = *std::min_element(ex.begin(), ex.end());
    const int nt = 5;
    std::vector<std::vector<double>> g(alloc.gammas.size(), std::vector<double>(nt));
    std::vector<std::vector<double>> r(alloc.gammas.size(), std::vector<double>(nt));
    for (std::size_t i = 0; i < alloc.gammas.size(); ++i) {
      for (int j = 0; j < nt; ++j) {
        g[i][j] = alloc.gammas[i];
        r[i][j] = alloc.rates[i];
      }
    }
    auto grid = box_build_grid(std::move(g), std::move(r), b, cfg);
    CHECK(box_grid_exponent(grid, b, cfg) >= bs_value - 1e-9);
  }
}

TEST_CASE("achievability frozen examples") {
  ChannelConfig cfg(2, 3, 1);
  CHECK(box_is_achievable(0.0, 1.0, cfg, 1, 1, FillOrder::sequential).achievable);

  ChannelConfig siso(1, 1, 1);
  for (double b : {0.5, 1.0, 3.0}) {
    const double t = b / (1.0 + b);
    CHECK(box_is_achievable(t - 1e-6, b, siso, 1, 1, FillOrder::sequential).achievable);
    CHECK_FALSE(box_is_achievable(t + 1e-6, b, siso, 1, 1, FillOrder::sequential).achievable);
  }
}

TEST_CASE("achievable targets stay below the informed-transmitter bound") {
  ChannelConfig cfg(2, 2, 1);
  for (double b : {0.5, 1.5, 4.0}) {
    const double cap = informed_transmitter_bound(b, cfg);
    CHECK_FALSE(box_is_achievable(cap + 0.01, b, cfg, 8, 8, FillOrder::sequential).achievable);
  }
}

TEST_CASE("greedy grids re-evaluate at or above their target") {
  for (auto [M, N] : {std::pair{1, 1}, std::pair{2, 2}, std::pair{3, 4}}) {
    ChannelConfig cfg(M, N, 1);
    for (double b : {0.3, 1.0, 2.5, 8.0}) {
      for (double frac : {0.15, 0.45, 0.8}) {
        const double d = frac * informed_transmitter_bound(b, cfg);
        for (auto order : {FillOrder::sequential, FillOrder::max_available_power}) {
          auto f = box_is_achievable(d, b, cfg, 6, 7, order);
          if (!f.achievable) continue;
          CHECK(box_grid_exponent(f.grid, b, cfg) >= d - 1e-9);
        }
      }
    }
  }
}

TEST_CASE("search frozen example: single cell") {
  ChannelConfig siso(1, 1, 1);
  auto v = box_max_exponent(1.0, siso, 1, 1, FillOrder::sequential, 1e-7);
  CHECK(v.exponent == doctest::Approx(0.5).epsilon(1e-6));
  REQUIRE(v.grid.has_value());
  CHECK(box_grid_exponent(*v.grid, 1.0, siso) >= v.exponent - 1e-9);
}

TEST_CASE("search dominates the broadcast limit on a finite grid") {
  ChannelConfig cfg(3, 4, 1);
  auto v = box_max_exponent(0.5, cfg, 10, 8, FillOrder::sequential);
  CHECK(v.exponent >= 1.5 - 0.05);
  CHECK(v.exponent <= informed_transmitter_bound(0.5, cfg) + 1e-6);
}

TEST_CASE("search result grows with the superposition depth") {
  ChannelConfig cfg(2, 2, 1);
  double prev = 0.0;
  for (int ns : {1, 2, 4, 8}) {
    auto v = box_max_exponent(1.0, cfg, ns, 8, FillOrder::sequential);
    CHECK(v.exponent >= prev - 1e-4);
    prev = v.exponent;
  }
}

TEST_CASE("max-available-power order fills the first row left to right") {
  ChannelConfig cfg(2, 2, 1);
  auto f = box_is_achievable(0.8, 1.0, cfg, 2, 3, FillOrder::max_available_power);
  REQUIRE(f.grid.visit.size() == 6);
  for (int j = 0; j < 3; ++j) {
    CHECK(f.grid.visit[j].first == 0);
    CHECK(f.grid.visit[j].second == j);
  }
}

TEST_CASE("brute force frozen examples") {
  ChannelConfig siso(1, 1, 1);
  auto v = box_bruteforce_small(1.0, siso, 1, 1);
  CHECK(v.exponent == doctest::Approx(0.5).epsilon(1e-6));
  auto v2 = box_bruteforce_small(1.0, siso, 1, 2);
  CHECK(v2.exponent >= v.exponent - 1e-9);
  CHECK_THROWS_AS(box_bruteforce_small(1.0, siso, 3, 3), std::domain_error);
}

TEST_CASE("brute force dominates the greedy on tiny grids") {
  for (auto [M, N] : {std::pair{1, 1}, std::pair{2, 2}}) {
    ChannelConfig cfg(M, N, 1);
    for (double b : {0.5, 2.0}) {
      for (auto [ns, nt] : {std::pair{1, 2}, std::pair{2, 1}, std::pair{2, 2}}) {
        auto oracle = box_bruteforce_small(b, cfg, ns, nt);
        auto greedy = box_max_exponent(b, cfg, ns, nt, FillOrder::sequential, 1e-6);
        CHECK(oracle.exponent >= greedy.exponent - 1e-6);
      }
    }
  }
}

TEST_CASE("skipped cells must carry zero rate") {
  ChannelConfig cfg(2, 2, 1);
  auto grid = box_build_grid({{1.0, 0.5}, {0.0, 0.0}}, {{0.3, 0.2}, {0.1, 0.1}}, 1.0, cfg);
  // column 1 slot 1 keeps gamma at 1 (skip) but declares a rate
  CHECK_THROWS_AS(box_grid_exponent(grid, 1.0, cfg), std::domain_error);
}

TEST_CASE("grid serialization carries the wire fields") {
  ChannelConfig cfg(2, 2, 1);
  auto f = box_is_achievable(0.5, 1.0, cfg, 2, 2, FillOrder::sequential);
  const std::string js = box_grid_to_json(f.grid);
  for (const char* key : {"\"nt\"", "\"ns\"", "\"gamma\"", "\"rate\"", "\"cum_rate\"",
                          "\"order\"", "\"b\"", "\"m_tx\"", "\"n_rx\""}) {
    CHECK(js.find(key) != std::string::npos);
  }
  CHECK(js.find("sequential") != std::string::npos);
}
