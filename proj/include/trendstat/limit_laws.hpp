#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "trendstat/parallel.hpp"
#include "trendstat/random.hpp"
#include "trendstat/simulate.hpp"
#include "trendstat/statistic.hpp"
#include "trendstat/trend.hpp"

namespace trendstat {

enum class Hypothesis { h0, h1_plus, h1_minus_notrend };

std::string to_string(Hypothesis h);
Hypothesis hypothesis_from_string(const std::string& s);

// Which limiting functional is being sampled:
//   (h0, kappa=0)        -> int W^2
//   (h0, trend r)        -> int B_r^2
//   (h1_plus, kappa=0)   -> int W^(d)2 / int W^(d-1)2
//   (h1_plus, trend r)   -> int C_{r,d}^2 / int W_{r,d-1}^2
//   (h1_minus_notrend)   -> (2 A + B) / (2 B) with unit variances
struct FunctionalId {
  Hypothesis hypothesis = Hypothesis::h0;
  bool kappa_zero = true;
  int r = 0;
  int d = 1;  // integration order, used by h1_plus only

  std::string key() const;
};

inline constexpr Eigen::Index kMinFunctionalGrid = 200;
inline constexpr Eigen::Index kDefaultTableGrid = 2000;
inline constexpr long kDefaultTableReps = 50000;

// Discretized squared Wiener integral of a unit-variance increment vector:
// sum_t S_t^2 / n^2 where S is the running sum of z.
double wiener_square_integral(const Eigen::VectorXd& z);

// One draw of the null functional from a given noise vector; proj must be
// null for the kappa = 0 case, and match z's length otherwise.
double h0_functional(const Eigen::VectorXd& z, const TrendProjector* proj);

// One draw of the positive-unit-root functional from given walk innovations.
double h1_plus_functional(const Eigen::VectorXd& eta, int d,
                          const TrendProjector* proj);

double sample_h0_functional(const FunctionalId& id, Eigen::Index grid_T,
                            std::uint64_t seed, std::uint64_t rep = 0);
double sample_h1_plus_functional(const FunctionalId& id, Eigen::Index grid_T,
                                 std::uint64_t seed, std::uint64_t rep = 0);
// Two independent Wiener functionals A and B combined into the negative
// unit-root limit (2 s_eps^2 A + s_eta^2 B) / (2 s_eta^2 B); always >= 1/2.
double sample_prop1_functional(double sigma_eps, double sigma_eta,
                               Eigen::Index grid_T, std::uint64_t seed,
                               std::uint64_t rep = 0);

// Dispatches on id.hypothesis (prop1 with unit variances).
double sample_functional(const FunctionalId& id, Eigen::Index grid_T,
                         std::uint64_t seed, std::uint64_t rep);

// Linear interpolation of order statistics (type-7) on sorted draws.
double empirical_quantile(const std::vector<double>& sorted, double prob);

const std::vector<double>& default_probability_grid();

struct QuantileTable {
  FunctionalId id;
  Eigen::Index grid_T = 0;
  long n_rep = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<double, double>> quantiles;  // (prob, value) sorted
  double mean = 0.0;
  std::string created_at;  // informational; not part of the persisted record
};

// n_rep substreamed draws of the functional, reduced to empirical quantiles.
// Deterministic in (id, grid_T, n_rep, seed) regardless of worker count.
QuantileTable build_table(const FunctionalId& id, Eigen::Index grid_T,
                          long n_rep, std::uint64_t seed,
                          const std::vector<double>& probs = default_probability_grid(),
                          unsigned workers = default_workers());

// Same reduction with an arbitrary draw function (rep -> value); the seeded
// samplers above are the production path, this is the generic core.
template <typename Sampler>
QuantileTable build_table_with(Sampler&& draw, const FunctionalId& id,
                               Eigen::Index grid_T, long n_rep,
                               std::uint64_t seed,
                               const std::vector<double>& probs,
                               unsigned workers) {
  if (n_rep < 1) throw std::invalid_argument("build_table: n_rep must be >= 1");
  if (probs.empty()) throw std::invalid_argument("build_table: empty probs");
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] > 0.0 && probs[i] < 1.0))
      throw std::invalid_argument("build_table: probs must lie in (0, 1)");
    if (i > 0 && probs[i] <= probs[i - 1])
      throw std::invalid_argument("build_table: probs must be strictly increasing");
  }
  std::vector<double> draws(static_cast<std::size_t>(n_rep));
  parallel_for_index(draws.size(), workers,
                     [&](std::size_t i) { draws[i] = draw(static_cast<std::uint64_t>(i)); });
  long double acc = 0.0L;
  for (double v : draws) acc += v;
  std::sort(draws.begin(), draws.end());

  QuantileTable table;
  table.id = id;
  table.grid_T = grid_T;
  table.n_rep = n_rep;
  table.seed = seed;
  table.mean = static_cast<double>(acc / static_cast<long double>(n_rep));
  table.quantiles.reserve(probs.size());
  for (double prob : probs)
    table.quantiles.emplace_back(prob, empirical_quantile(draws, prob));
  return table;
}

struct LookupResult {
  double value = 0.0;
  bool extrapolated = false;  // prob fell outside the stored grid, clamped
};

// Quantile at prob by linear interpolation between stored entries, clamped
// at the ends. prob outside (0, 1) is rejected.
LookupResult lookup(const QuantileTable& table, double prob);

}  // namespace trendstat
