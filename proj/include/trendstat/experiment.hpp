#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trendstat/decision.hpp"
#include "trendstat/limit_laws.hpp"
#include "trendstat/simulate.hpp"
#include "trendstat/statistic.hpp"

namespace trendstat {

// lmc: AR-filtered pipeline statistic, classic one-sided rule.
// corrected: same statistic, two-sided rule.
// kpss: detrend-only statistic with a long-run-variance denominator,
//       classic rule against the same null table.
enum class Procedure { kpss, lmc, corrected };

std::string to_string(Procedure p);
Procedure procedure_from_string(const std::string& s);

enum class Scenario { h0, h1_plus, h1_minus };

std::string to_string(Scenario s);

// Detrend-only statistic: partial sums of the trend residuals over
// T^2 times the Bartlett long-run variance. bandwidth <= 0 selects the
// default schedule.
double kpss_statistic(const TimeSeries& y, const TrendSpec& trend,
                      int bandwidth = 0);

struct ExperimentConfig {
  DgpConfig dgp;  // template; walk settings are overridden per scenario
  std::vector<Scenario> scenarios = {Scenario::h0, Scenario::h1_plus,
                                     Scenario::h1_minus};
  std::vector<Procedure> procedures = {Procedure::kpss, Procedure::lmc,
                                       Procedure::corrected};
  long n_rep = 2000;
  double alpha = 0.05;
  unsigned workers = default_workers();
  std::uint64_t seed = 0;      // master seed; replications are substreamed
  int kpss_bandwidth = 0;      // 0 = default schedule
  std::string output_path;     // optional JSON destination, CLI concern
};

// One simulated process per (scenario, replication); every procedure is
// evaluated on that same path, as in the reference experiments.
DgpConfig scenario_config(const ExperimentConfig& cfg, Scenario scenario,
                          std::uint64_t rep);

struct RateCell {
  Scenario scenario;
  Procedure procedure;
  long n_reject = 0;
  long n_rep = 0;
  double rate() const { return static_cast<double>(n_reject) / n_rep; }
  double stderr_rate() const {
    const double p = rate();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n_rep));
  }
};

struct StudyReport {
  std::vector<RateCell> cells;  // scenario-major, procedure-minor
  double alpha = 0.05;
  long n_rep = 0;
  Eigen::Index sample_size = 0;
  std::uint64_t seed = 0;
  int kpss_bandwidth = 0;  // resolved value actually used
  std::string table_key;

  const RateCell& cell(Scenario s, Procedure p) const;
};

StudyReport run_replication_study(const ExperimentConfig& cfg,
                                  const QuantileTable& null_table);

}  // namespace trendstat
