#include "trendstat/statistic.hpp"

namespace trendstat {

StatResult k_statistic(const Eigen::VectorXd& resid) {
  PartialSums ps = partial_sums(resid);
  if (ps.q_total <= 0.0) throw std::runtime_error("zero residual energy");

  long double energy = 0.0L;
  for (Eigen::Index t = 0; t < ps.s.size(); ++t)
    energy += static_cast<long double>(ps.s[t]) * ps.s[t];

  StatResult out;
  out.n = resid.size();
  out.q_total = ps.q_total;
  out.s = std::move(ps.s);
  out.k_hat = static_cast<double>(
      energy / (static_cast<long double>(out.n) * ps.q_total));
  out.k_over_T = out.k_hat / static_cast<double>(out.n);
  out.T_times_k = out.k_hat * static_cast<double>(out.n);
  return out;
}

std::pair<StatResult, FitResult> run_test_pipeline(
    const TimeSeries& y, int p, const TrendSpec& trend,
    const PipelineOptions& options) {
  FitResult fit;
  fit.trend = trend;
  fit.p = p;

  if (p > 0) {
    fit.arima = fit_arima(y, p, trend, options.fit_rho, options.css);
    fit.filtered = ar_filter(y.values, fit.arima.theta_check);
  } else {
    fit.filtered = y.values;
  }

  fit.ols = ols_fit(fit.filtered, trend);
  fit.residuals = fit.ols.residuals;

  return {k_statistic(fit.residuals), std::move(fit)};
}

}  // namespace trendstat
