#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <trendstat/simulate.hpp>

#include "test_util.hpp"

using namespace trendstat;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST_CASE("draw_noise: zero sigma is identically zero") {
  NoiseSpec spec;
  spec.sigma = 0.0;
  const Eigen::VectorXd z = draw_noise(spec, 5);
  REQUIRE(z.size() == 5);
  CHECK(z.isZero(0.0));
}

TEST_CASE("draw_noise: sample mean obeys the law of large numbers") {
  NoiseSpec spec;
  spec.sigma = 1.0;
  spec.seed = 2023;
  const Eigen::VectorXd z = draw_noise(spec, 1000);
  // 3 sigma / sqrt(n) ~ 0.095
  CHECK(std::abs(z.mean()) < 0.1);
  CHECK(std::abs(z.squaredNorm() / 1000.0 - 1.0) < 0.15);
}

TEST_CASE("draw_noise: identical (seed, stream) replays bit-identical draws") {
  NoiseSpec spec;
  spec.seed = 99;
  spec.stream = 7;
  const Eigen::VectorXd a = draw_noise(spec, 256);
  const Eigen::VectorXd b = draw_noise(spec, 256);
  CHECK(a == b);

  spec.stream = 8;
  const Eigen::VectorXd c = draw_noise(spec, 256);
  CHECK(a != c);
}

TEST_CASE("random_walk: forced recursions") {
  CHECK(random_walk(vec({1, 1, 1}), -1) == vec({1, 0, 1}));
  CHECK(random_walk(vec({1, 2, 3}), +1) == vec({1, 3, 6}));
  CHECK(random_walk(Eigen::VectorXd::Zero(6), -1).isZero(0.0));
  CHECK_THROWS_AS(random_walk(vec({1.0}), 2), std::invalid_argument);
}

TEST_CASE("integrated_walk: hand iterations and composition") {
  CHECK(integrated_walk(vec({1, 1, 1}), 2) == vec({1, 3, 6}));
  CHECK(integrated_walk(vec({1, 0, 0}), 3) == vec({1, 3, 6}));
  CHECK_THROWS_AS(integrated_walk(vec({1, 2}), 0), std::invalid_argument);

  NoiseSpec spec;
  spec.seed = 5;
  const Eigen::VectorXd eta = draw_noise(spec, 128);
  CHECK(integrated_walk(eta, 1) == random_walk(eta, +1));
  // d-fold walk composes exactly as (d-1)-fold then once more.
  CHECK(integrated_walk(eta, 3) == integrated_walk(integrated_walk(eta, 2), 1));
}

TEST_CASE("simulate_dgp: degenerate configurations") {
  DgpConfig cfg;
  cfg.sample_size = 50;

  SUBCASE("all noise off gives the zero series") {
    cfg.eps_noise.sigma = 0.0;
    CHECK(simulate_dgp(cfg).values.isZero(0.0));
  }
  SUBCASE("pure intercept gives a constant") {
    cfg.eps_noise.sigma = 0.0;
    cfg.kappa_zero = false;
    cfg.trend_order = 0;
    cfg.trend_coef = vec({3.5});
    const TimeSeries y = simulate_dgp(cfg);
    CHECK((y.values.array() == 3.5).all());
  }
  SUBCASE("noncausal AR is rejected") {
    cfg.p = 1;
    cfg.theta = vec({1.0});
    CHECK_THROWS_WITH_AS(static_cast<void>(simulate_dgp(cfg)), "noncausal AR",
                         std::invalid_argument);
  }
  SUBCASE("d >= 2 requires rho = +1") {
    cfg.d = 2;
    cfg.rho = -1;
    CHECK_THROWS_AS(static_cast<void>(simulate_dgp(cfg)), std::invalid_argument);
  }
}

TEST_CASE("simulate_dgp: pure function of its configuration") {
  DgpConfig cfg;
  cfg.sample_size = 200;
  cfg.p = 2;
  cfg.theta = vec({0.4, 0.2});
  cfg.d = 1;
  cfg.rho = -1;
  cfg.eps_noise.seed = 11;
  cfg.eta_noise.seed = 12;
  CHECK(simulate_dgp(cfg).values == simulate_dgp(cfg).values);

  DgpConfig other = cfg.with_replication(3);
  CHECK(simulate_dgp(cfg).values != simulate_dgp(other).values);
}

TEST_CASE("simulate_dgp: burn-in drops the AR transient only") {
  DgpConfig cfg;
  cfg.sample_size = 100;
  cfg.p = 1;
  cfg.theta = vec({0.7});
  cfg.eps_noise.seed = 3;
  const TimeSeries cold = simulate_dgp(cfg);
  cfg.burn_in = 50;
  const TimeSeries warm = simulate_dgp(cfg);
  REQUIRE(warm.size() == cold.size());
  CHECK(warm.values != cold.values);
}

TEST_CASE("alternating walk: even-index compensation identity") {
  // For rho = -1, the running sums of the walk collapse to the even-indexed
  // innovations: sum_{k<=t} S_k = sum_{k<=t/2} eta_{2k} at even t.
  NoiseSpec spec;
  spec.seed = 31;
  const Eigen::VectorXd eta = draw_noise(spec, 400);
  const Eigen::VectorXd s = random_walk(eta, -1);
  const double scale = std::sqrt(eta.squaredNorm());
  for (Eigen::Index t = 2; t <= 400; t += 2) {
    double lhs = 0.0, rhs = 0.0;
    for (Eigen::Index k = 0; k < t; ++k) lhs += s[k];
    for (Eigen::Index k = 1; k < t; k += 2) rhs += eta[k];  // eta_2, eta_4, ...
    CHECK(std::abs(lhs - rhs) < 1e-10 * scale);
  }
}

TEST_CASE("variance profile: flat under the null, linear under rho = -1") {
  // Blockwise sample variances regressed on the block index; the walk with a
  // negative unit root has V(Y_t) growing linearly in t.
  constexpr int reps = 200;
  constexpr Eigen::Index T = 600;
  constexpr int blocks = 10;
  constexpr Eigen::Index width = T / blocks;

  auto mean_block_variances = [&](bool with_walk) {
    std::vector<double> acc(blocks, 0.0);
    for (int repl = 0; repl < reps; ++repl) {
      DgpConfig cfg;
      cfg.sample_size = T;
      cfg.d = with_walk ? 1 : 0;
      cfg.rho = -1;
      cfg.eps_noise.seed = with_walk ? 555 : 556;
      cfg.eta_noise.seed = 557;
      cfg = cfg.with_replication(static_cast<std::uint64_t>(repl));
      const Eigen::VectorXd y = simulate_dgp(cfg).values;
      for (int b = 0; b < blocks; ++b) {
        const auto seg = y.segment(b * width, width);
        const double m = seg.mean();
        acc[static_cast<std::size_t>(b)] +=
            (seg.array() - m).square().sum() / static_cast<double>(width - 1);
      }
    }
    for (double& v : acc) v /= reps;
    return acc;
  };

  const auto h0 = testutil::slope_on_index(mean_block_variances(false));
  CHECK(std::abs(h0.slope) < 3.0 * h0.stderr_slope);

  const auto h1m = testutil::slope_on_index(mean_block_variances(true));
  CHECK(h1m.slope > 3.0 * h1m.stderr_slope);
}
