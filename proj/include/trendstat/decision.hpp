#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trendstat/limit_laws.hpp"
#include "trendstat/statistic.hpp"
#include "trendstat/trend.hpp"

namespace trendstat {

// classic is the historical one-sided rule (upper tail only, level alpha);
// corrected splits alpha/2 onto each tail so that a unit root at -1, which
// drives the statistic to zero, is caught at the lower cut. upper_only and
// lower_only are the directional single-alternative variants.
enum class Rule { classic, corrected, upper_only, lower_only };

enum class Direction { none, h1_plus_side, h1_minus_side };

std::string to_string(Rule rule);
Rule rule_from_string(const std::string& s);
std::string to_string(Direction d);

struct TestReport {
  double statistic = 0.0;
  Rule rule = Rule::classic;
  double alpha = 0.05;
  std::optional<double> lower_cut;  // k_{alpha/2} or k_alpha, when consulted
  std::optional<double> upper_cut;  // k_{1-alpha} or k_{1-alpha/2}
  bool reject = false;
  Direction direction = Direction::none;
  std::string table_key;  // functional id plus table provenance
  std::vector<std::pair<double, double>> quantiles_consulted;  // (prob, value)
};

// The table must hold the null functional matching the fitted trend;
// anything else is refused as "wrong null table". alpha must be in (0, 0.5).
TestReport decide(const StatResult& stat, const QuantileTable& table,
                  const TrendSpec& trend, Rule rule, double alpha);

struct ApproxPValue {
  double value = 0.0;
  bool grid_edge = false;  // statistic beyond the stored grid, value clamped
  // Always an interpolation from the stored quantile grid, never exact.
};

ApproxPValue approximate_p_value(const StatResult& stat,
                                 const QuantileTable& table, Rule rule);

}  // namespace trendstat
