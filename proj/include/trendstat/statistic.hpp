#pragma once

#include <stdexcept>
#include <utility>

#include <Eigen/Core>

#include "trendstat/arima.hpp"
#include "trendstat/simulate.hpp"
#include "trendstat/trend.hpp"

namespace trendstat {

// Running sums S_t of the residuals together with the total sum of squares
// Q_T. The squared partial sums can reach O(T^3) under the alternative, so
// downstream reductions accumulate in extended precision.
struct PartialSums {
  Eigen::VectorXd s;
  double q_total = 0.0;
};

template <typename Derived>
PartialSums partial_sums(const Eigen::MatrixBase<Derived>& resid) {
  if (resid.size() < 1)
    throw std::invalid_argument("partial_sums: empty residuals");
  PartialSums out;
  out.s.resize(resid.size());
  long double run = 0.0L, q = 0.0L;
  for (Eigen::Index t = 0; t < resid.size(); ++t) {
    const double e = resid[t];
    run += e;
    q += static_cast<long double>(e) * e;
    out.s[t] = static_cast<double>(run);
  }
  out.q_total = static_cast<double>(q);
  return out;
}

struct StatResult {
  double k_hat = 0.0;      // sum_t S_t^2 / (T Q_T)
  double k_over_T = 0.0;
  double T_times_k = 0.0;
  Eigen::VectorXd s;       // partial sums S_t
  double q_total = 0.0;    // Q_T
  Eigen::Index n = 0;      // T
};

// K statistic of a residual vector. Scale-invariant: residuals scaled by any
// nonzero c leave k_hat unchanged.
StatResult k_statistic(const Eigen::VectorXd& resid);

struct FitResult {
  ArimaFit arima;             // default-constructed when p = 0
  OlsFit ols;                 // final detrending of the filtered series
  Eigen::VectorXd filtered;   // Y after AR filtering
  Eigen::VectorXd residuals;  // what the statistic is built from
  TrendSpec trend;
  int p = 0;
};

struct PipelineOptions {
  // The ARMA stage always differences before estimating (theta, beta);
  // summation (1+L) is exposed for exploration only.
  int fit_rho = 1;
  CssOptions css;
};

// Full testing pipeline: estimate (theta, beta) on the differenced, detrended
// series, AR-filter the observations with theta, detrend the filtered series,
// and form the K statistic from the residuals. With p = 0 the ARMA stage is
// skipped entirely and the residuals come straight from the detrending (or
// the raw series when no trend is fitted).
std::pair<StatResult, FitResult> run_test_pipeline(
    const TimeSeries& y, int p, const TrendSpec& trend,
    const PipelineOptions& options = {});

}  // namespace trendstat
