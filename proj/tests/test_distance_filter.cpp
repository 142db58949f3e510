#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "scootsim/distance_filter.hpp"
#include "scootsim/errors.hpp"
#include "scootsim/rng.hpp"

using namespace scootsim;

namespace {
const FilterConfig kCfg{};  // T_i = 0.79, T_d = 0.03, tau_mem = 5, dt = 0.02
}

TEST_CASE("smoothing constant map and its inverse") {
  CHECK(alpha_from_T(0.79, 0.02) ==
        doctest::Approx(1.0 - std::exp(-0.02 / 0.79)).epsilon(1e-15));
  CHECK(alpha_from_T(0.03, 0.02) ==
        doctest::Approx(0.48658288096740797).epsilon(1e-12));
  for (double T : {0.003, 0.03, 0.2, 0.79, 3.0}) {
    const double back = T_from_alpha(alpha_from_T(T, 0.02), 0.02);
    CHECK(std::fabs(back / T - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(alpha_from_T(0.0, 0.02), ConfigError);
  CHECK_THROWS_AS(alpha_from_T(0.5, -1.0), ConfigError);
  CHECK_THROWS_AS(T_from_alpha(0.0, 0.02), ConfigError);
  CHECK_THROWS_AS(T_from_alpha(1.5, 0.02), ConfigError);
}

TEST_CASE("ring minimum matches the naive sliding window") {
  for (int window : {1, 2, 5, 17}) {
    FilterState state(window);
    std::vector<double> history;
    Rng rng(13 + window);
    for (int i = 0; i < 20000; ++i) {
      const double d = 5.0 * rng.uniform01();
      history.push_back(d);
      CHECK(memory_min(state, d) == oracles::naive_window_min(history, window));
    }
  }
}

TEST_CASE("smoothing starts at zero and tracks the naive recursion") {
  Rng rng(29);
  std::vector<double> raw;
  for (int i = 0; i < 5000; ++i) raw.push_back(4.0 * rng.uniform01());
  const std::vector<double> expect =
      oracles::naive_filter_sequence(raw, kCfg.T_i, kCfg.T_d, kCfg.tau_mem, kCfg.dt);
  FilterState state(kCfg.tau_mem);
  CHECK(state.d_filt() == 0.0);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double got = filter_step(state, raw[i], kCfg);
    CHECK(got == doctest::Approx(expect[i]).epsilon(1e-13));
    CHECK(got == state.d_filt());
  }
}

TEST_CASE("output stays inside the hull of its inputs") {
  Rng rng(31);
  FilterState state(kCfg.tau_mem);
  for (int i = 0; i < 20000; ++i) {
    const double prev = state.d_filt();
    const double d = 4.0 * rng.uniform01();
    FilterState probe = state;  // peek at the window min without advancing
    const double mn = memory_min(probe, d);
    const double out = filter_step(state, d, kCfg);
    CHECK(out <= std::max(prev, mn) + 1e-15);
    CHECK(out >= std::min(prev, mn) - 1e-15);
  }
}

TEST_CASE("down-steps settle fast, up-steps settle slowly") {
  FilterState state(kCfg.tau_mem);
  for (int i = 0; i < 2000; ++i) filter_step(state, 4.0, kCfg);
  int down_ticks = 0;
  while (std::fabs(state.d_filt() - 1.0) > 0.05) {
    filter_step(state, 1.0, kCfg);
    ++down_ticks;
    REQUIRE(down_ticks < 1000);
  }
  CHECK(down_ticks * kCfg.dt <= 0.2);
  CHECK(down_ticks == 7);

  FilterState up(kCfg.tau_mem);
  for (int i = 0; i < 4000; ++i) filter_step(up, 1.0, kCfg);
  int up_ticks = 0;
  while (std::fabs(up.d_filt() - 4.0) > 0.2) {
    filter_step(up, 4.0, kCfg);
    ++up_ticks;
    REQUIRE(up_ticks < 10000);
  }
  CHECK(up_ticks * kCfg.dt >= 2.0);
  CHECK(up_ticks == 111);
}

TEST_CASE("a single full-range dropout is masked by the window") {
  FilterState state(kCfg.tau_mem);
  for (int i = 0; i < 500; ++i) filter_step(state, 0.9, kCfg);
  const double before = state.d_filt();
  const double at_dropout = filter_step(state, 4.0, kCfg);
  // Window min is still 0.9; only the slow/fast constant choice changes.
  const double alpha_i = alpha_from_T(kCfg.T_i, kCfg.dt);
  CHECK(at_dropout ==
        doctest::Approx(alpha_i * 0.9 + (1 - alpha_i) * before).epsilon(1e-13));
  CHECK(std::fabs(at_dropout - before) < 1e-3);
}

TEST_CASE("the raw reading, not the window min, picks the time constant") {
  // Window still remembers a low 1.0 while the raw reading jumps to 3.0
  // above the previous output of ~2.0: the slow constant must be used even
  // though the update target (the window min) is below the output.
  FilterState state(kCfg.tau_mem);
  for (int i = 0; i < 3000; ++i) filter_step(state, 2.0, kCfg);
  filter_step(state, 1.0, kCfg);
  const double prev = state.d_filt();
  const double out = filter_step(state, 3.0, kCfg);
  const double alpha_i = alpha_from_T(kCfg.T_i, kCfg.dt);
  CHECK(out == doctest::Approx(alpha_i * 1.0 + (1 - alpha_i) * prev).epsilon(1e-13));
}

TEST_CASE("negative readings are rejected") {
  FilterState state(kCfg.tau_mem);
  CHECK_THROWS_AS(filter_step(state, -0.1, kCfg), InputError);
}

TEST_CASE("configuration validation") {
  FilterConfig bad = kCfg;
  bad.T_d = 0.79;
  bad.T_i = 0.03;  // must be T_i > T_d
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = kCfg;
  bad.tau_mem = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = kCfg;
  bad.dt = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("three-beam fusion") {
  CHECK(critical_distance(1.0, 2.0, 3.0) == 1.0);
  CHECK(critical_distance(2.0, 1.5, 3.0) == 1.5);

  const auto mounts = default_mounts();
  Rng rng(37);
  SUBCASE("pure-min blend is identical to the plain minimum") {
    FusionConfig fusion;  // blend_lambda = 1
    for (int i = 0; i < 10000; ++i) {
      const double c = 5.0 * rng.uniform01();
      const double l = 5.0 * rng.uniform01();
      const double r = 5.0 * rng.uniform01();
      const double delta = -0.7 + 1.4 * rng.uniform01();
      CHECK(weighted_critical_distance(c, l, r, delta, fusion, mounts) ==
            critical_distance(c, l, r));
    }
  }
  SUBCASE("blend stays inside the convex hull") {
    for (int i = 0; i < 10000; ++i) {
      FusionConfig fusion;
      fusion.blend_lambda = rng.uniform01();
      const double c = 5.0 * rng.uniform01();
      const double l = 5.0 * rng.uniform01();
      const double r = 5.0 * rng.uniform01();
      const double w = weighted_critical_distance(c, l, r, 0.1, fusion, mounts);
      CHECK(w >= std::min({c, l, r}) - 1e-12);
      CHECK(w <= std::max({c, l, r}) + 1e-12);
    }
  }
  SUBCASE("equal inputs are a fixed point for any blend") {
    for (double lam : {0.0, 0.3, 1.0}) {
      FusionConfig fusion;
      fusion.blend_lambda = lam;
      CHECK(weighted_critical_distance(1.7, 1.7, 1.7, 0.2, fusion, mounts) ==
            doctest::Approx(1.7).epsilon(1e-15));
    }
  }
  SUBCASE("bad blend parameters are rejected") {
    FusionConfig fusion;
    fusion.blend_lambda = 1.5;
    CHECK_THROWS_AS(weighted_critical_distance(1, 1, 1, 0, fusion, mounts),
                    ConfigError);
  }
}
