#include "trendstat/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>

#include "trendstat/arima.hpp"
#include "trendstat/parallel.hpp"

namespace trendstat {

std::string to_string(Procedure p) {
  switch (p) {
    case Procedure::kpss: return "kpss";
    case Procedure::lmc: return "lmc";
    case Procedure::corrected: return "corrected";
  }
  throw std::logic_error("unknown procedure");
}

Procedure procedure_from_string(const std::string& s) {
  if (s == "kpss") return Procedure::kpss;
  if (s == "lmc") return Procedure::lmc;
  if (s == "corrected") return Procedure::corrected;
  throw std::invalid_argument("unknown procedure '" + s + "'");
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::h0: return "H0";
    case Scenario::h1_plus: return "H1_plus";
    case Scenario::h1_minus: return "H1_minus";
  }
  throw std::logic_error("unknown scenario");
}

double kpss_statistic(const TimeSeries& y, const TrendSpec& trend,
                      int bandwidth) {
  const Eigen::VectorXd resid = ols_fit(y.values, trend).residuals;
  if (bandwidth <= 0) bandwidth = default_bandwidth(y.size());
  const LongRunVariance lrv = long_run_variance(resid, bandwidth);
  const PartialSums ps = partial_sums(resid);
  long double energy = 0.0L;
  for (Eigen::Index t = 0; t < ps.s.size(); ++t)
    energy += static_cast<long double>(ps.s[t]) * ps.s[t];
  const long double n = static_cast<long double>(y.size());
  return static_cast<double>(energy / (n * n * lrv.value));
}

DgpConfig scenario_config(const ExperimentConfig& cfg, Scenario scenario,
                          std::uint64_t rep) {
  DgpConfig dgp = cfg.dgp;
  switch (scenario) {
    case Scenario::h0:
      dgp.d = 0;
      break;
    case Scenario::h1_plus:
      dgp.d = std::max(1, cfg.dgp.d);
      dgp.rho = 1;
      break;
    case Scenario::h1_minus:
      dgp.d = 1;
      dgp.rho = -1;
      break;
  }
  // Scenarios draw from disjoint seed spaces; replications substream within.
  const std::uint64_t tag = static_cast<std::uint64_t>(scenario) + 1;
  dgp.eps_noise.seed = stream_key(cfg.seed, tag);
  dgp.eta_noise.seed = stream_key(cfg.seed, tag + 16);
  return dgp.with_replication(rep);
}

const RateCell& StudyReport::cell(Scenario s, Procedure p) const {
  for (const auto& c : cells)
    if (c.scenario == s && c.procedure == p) return c;
  throw std::out_of_range("no such cell in study report");
}

StudyReport run_replication_study(const ExperimentConfig& cfg,
                                  const QuantileTable& null_table) {
  if (cfg.n_rep < 1)
    throw std::invalid_argument("replication study: n_rep must be >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 0.5))
    throw std::invalid_argument("replication study: alpha must lie in (0, 0.5)");

  const TrendSpec trend{cfg.dgp.kappa_zero, cfg.dgp.trend_order};
  const int bandwidth = cfg.kpss_bandwidth > 0
                            ? cfg.kpss_bandwidth
                            : default_bandwidth(cfg.dgp.sample_size);

  StudyReport report;
  report.alpha = cfg.alpha;
  report.n_rep = cfg.n_rep;
  report.sample_size = cfg.dgp.sample_size;
  report.seed = cfg.seed;
  report.kpss_bandwidth = bandwidth;
  {
    std::ostringstream key;
    key << null_table.id.key() << " grid_T=" << null_table.grid_T
        << " n_rep=" << null_table.n_rep << " seed=" << null_table.seed;
    report.table_key = key.str();
  }

  const bool want_kpss = std::find(cfg.procedures.begin(), cfg.procedures.end(),
                                   Procedure::kpss) != cfg.procedures.end();
  const bool want_lmc = std::find(cfg.procedures.begin(), cfg.procedures.end(),
                                  Procedure::lmc) != cfg.procedures.end();
  const bool want_corr = std::find(cfg.procedures.begin(), cfg.procedures.end(),
                                   Procedure::corrected) != cfg.procedures.end();

  for (Scenario scenario : cfg.scenarios) {
    std::atomic<long> rej_kpss{0}, rej_lmc{0}, rej_corr{0};

    parallel_for_index(static_cast<std::size_t>(cfg.n_rep), cfg.workers,
                       [&](std::size_t i) {
      const TimeSeries path = simulate_dgp(scenario_config(cfg, scenario, i));

      if (want_lmc || want_corr) {
        const auto [stat, fit] = run_test_pipeline(path, cfg.dgp.p, trend);
        if (want_lmc &&
            decide(stat, null_table, trend, Rule::classic, cfg.alpha).reject)
          rej_lmc.fetch_add(1, std::memory_order_relaxed);
        if (want_corr &&
            decide(stat, null_table, trend, Rule::corrected, cfg.alpha).reject)
          rej_corr.fetch_add(1, std::memory_order_relaxed);
      }
      if (want_kpss) {
        StatResult stat;
        stat.k_hat = kpss_statistic(path, trend, bandwidth);
        stat.n = path.size();
        if (decide(stat, null_table, trend, Rule::classic, cfg.alpha).reject)
          rej_kpss.fetch_add(1, std::memory_order_relaxed);
      }
    });

    for (Procedure proc : cfg.procedures) {
      RateCell cell;
      cell.scenario = scenario;
      cell.procedure = proc;
      cell.n_rep = cfg.n_rep;
      cell.n_reject = proc == Procedure::kpss  ? rej_kpss.load()
                      : proc == Procedure::lmc ? rej_lmc.load()
                                               : rej_corr.load();
      report.cells.push_back(cell);
    }
  }
  return report;
}

}  // namespace trendstat
