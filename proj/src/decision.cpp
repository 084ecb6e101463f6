#include "trendstat/decision.hpp"

#include <algorithm>
#include <sstream>

namespace trendstat {

std::string to_string(Rule rule) {
  switch (rule) {
    case Rule::classic: return "classic";
    case Rule::corrected: return "corrected";
    case Rule::upper_only: return "upper";
    case Rule::lower_only: return "lower";
  }
  throw std::logic_error("unknown rule");
}

Rule rule_from_string(const std::string& s) {
  if (s == "classic") return Rule::classic;
  if (s == "corrected") return Rule::corrected;
  if (s == "upper") return Rule::upper_only;
  if (s == "lower") return Rule::lower_only;
  throw std::invalid_argument("unknown rule '" + s + "'");
}

std::string to_string(Direction d) {
  switch (d) {
    case Direction::none: return "none";
    case Direction::h1_plus_side: return "H1_plus_side";
    case Direction::h1_minus_side: return "H1_minus_side";
  }
  throw std::logic_error("unknown direction");
}

namespace {

std::string provenance(const QuantileTable& table) {
  std::ostringstream out;
  out << table.id.key() << " grid_T=" << table.grid_T
      << " n_rep=" << table.n_rep << " seed=" << table.seed;
  return out.str();
}

void check_null_table(const QuantileTable& table, const TrendSpec& trend) {
  const bool match = table.id.hypothesis == Hypothesis::h0 &&
                     table.id.kappa_zero == trend.kappa_zero &&
                     (trend.kappa_zero || table.id.r == trend.order);
  if (!match) throw std::invalid_argument("wrong null table");
}

// Piecewise-linear CDF through the stored (prob, value) pairs, clamped to
// the stored probability range at both ends.
double interpolated_cdf(const QuantileTable& table, double x, bool* edge) {
  const auto& q = table.quantiles;
  if (edge) *edge = false;
  if (x <= q.front().second) {
    if (edge) *edge = x < q.front().second;
    return q.front().first;
  }
  if (x >= q.back().second) {
    if (edge) *edge = x > q.back().second;
    return q.back().first;
  }
  for (std::size_t i = 1; i < q.size(); ++i) {
    if (x <= q[i].second) {
      const auto& [p0, v0] = q[i - 1];
      const auto& [p1, v1] = q[i];
      if (v1 == v0) return p1;
      return p0 + (p1 - p0) * (x - v0) / (v1 - v0);
    }
  }
  return q.back().first;  // unreachable
}

}  // namespace

TestReport decide(const StatResult& stat, const QuantileTable& table,
                  const TrendSpec& trend, Rule rule, double alpha) {
  check_null_table(table, trend);
  if (!(alpha > 0.0 && alpha < 0.5))
    throw std::invalid_argument("decide: alpha must lie in (0, 0.5)");

  TestReport report;
  report.statistic = stat.k_hat;
  report.rule = rule;
  report.alpha = alpha;
  report.table_key = provenance(table);

  auto cut = [&](double prob) {
    const LookupResult q = lookup(table, prob);
    report.quantiles_consulted.emplace_back(prob, q.value);
    return q.value;
  };

  switch (rule) {
    case Rule::classic:
    case Rule::upper_only:
      report.upper_cut = cut(1.0 - alpha);
      break;
    case Rule::corrected:
      report.lower_cut = cut(alpha / 2.0);
      report.upper_cut = cut(1.0 - alpha / 2.0);
      break;
    case Rule::lower_only:
      report.lower_cut = cut(alpha);
      break;
  }

  if (report.upper_cut && stat.k_hat > *report.upper_cut) {
    report.reject = true;
    report.direction = Direction::h1_plus_side;
  } else if (report.lower_cut && stat.k_hat < *report.lower_cut) {
    report.reject = true;
    report.direction = Direction::h1_minus_side;
  }
  return report;
}

ApproxPValue approximate_p_value(const StatResult& stat,
                                 const QuantileTable& table, Rule rule) {
  if (table.quantiles.empty())
    throw std::invalid_argument("approximate_p_value: empty table");
  bool edge = false;
  const double f = interpolated_cdf(table, stat.k_hat, &edge);

  double p = 0.0;
  switch (rule) {
    case Rule::classic:
    case Rule::upper_only:
      p = 1.0 - f;
      break;
    case Rule::lower_only:
      p = f;
      break;
    case Rule::corrected:
      p = 2.0 * std::min(f, 1.0 - f);
      break;
  }
  // The stored grid bounds the resolution: nothing below the smallest tail
  // probability can be distinguished, so clamp there.
  const double lo = std::min(table.quantiles.front().first,
                             1.0 - table.quantiles.back().first);
  ApproxPValue out;
  out.value = std::clamp(p, lo, 1.0);
  out.grid_edge = edge || p < lo;
  return out;
}

}  // namespace trendstat
