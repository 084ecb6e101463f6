#pragma once

#include <functional>
#include <stdexcept>

#include <Eigen/Core>

#include "trendstat/simulate.hpp"
#include "trendstat/trend.hpp"

namespace trendstat {

// z_t = y_t - rho * y_{t-1} for t = 2..T; length T-1.
template <typename Derived>
Eigen::VectorX<typename Derived::Scalar> difference(
    const Eigen::MatrixBase<Derived>& y, int rho) {
  using Scalar = typename Derived::Scalar;
  if (rho != 1 && rho != -1)
    throw std::invalid_argument("difference: rho must be +1 or -1");
  if (y.size() < 2) throw std::invalid_argument("difference: need length >= 2");
  return y.tail(y.size() - 1) - Scalar(rho) * y.head(y.size() - 1);
}

// Filtered series Y_t - theta_1 Y_{t-1} - ... - theta_p Y_{t-p} with zero
// presample values; same length as the input.
template <typename Derived, typename DerivedTheta>
Eigen::VectorX<typename Derived::Scalar> ar_filter(
    const Eigen::MatrixBase<Derived>& y,
    const Eigen::MatrixBase<DerivedTheta>& theta) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index p = theta.size();
  if (y.size() < p + 1)
    throw std::invalid_argument("ar_filter: series shorter than p + 1");
  Eigen::VectorX<Scalar> out(y.size());
  for (Eigen::Index t = 0; t < y.size(); ++t) {
    Scalar v = y[t];
    for (Eigen::Index i = 1; i <= p && t - i >= 0; ++i)
      v -= theta[i - 1] * y[t - i];
    out[t] = v;
  }
  return out;
}

// Conditional sum of squares of the ARMA(p,1) recursion
//   e_t = w_t - sum_i theta_i w_{t-i} - beta e_{t-1},
// with zero presample w and e.
double css_objective(const Eigen::VectorXd& w, const Eigen::VectorXd& theta,
                     double beta);

struct ArimaFit {
  Eigen::VectorXd theta_check;   // AR estimates, size p
  double beta_check = 0.0;       // MA estimate, in [-1, 1]
  double sigma_xi2 = 0.0;        // css / effective sample size
  Eigen::VectorXd gamma_hat;     // trend of the differenced model, may be empty
  double css = 0.0;
  bool converged = false;
  int iterations = 0;
  bool causality_projected = false;  // theta pulled back to the causal region
};

struct CssOptions {
  int max_iterations = 500;
  double rel_tol = 1e-10;
  // Called once per optimizer iteration with (iteration, best objective);
  // the best objective is nonincreasing by construction.
  std::function<void(int, double)> trace;
};

// Difference with the given rho, detrend the differenced series by least
// squares with the same TrendSpec, then minimize the conditional sum of
// squares over (theta, beta) with beta box-constrained to [-1, 1] and theta
// kept causal by penalty plus projection. With p = 0 only beta is optimized.
ArimaFit fit_arima(const TimeSeries& y, int p, const TrendSpec& trend, int rho,
                   const CssOptions& options = {});

enum class LrvKernel { bartlett };

struct LongRunVariance {
  double value = 0.0;
  int bandwidth = 0;
  LrvKernel kernel = LrvKernel::bartlett;
};

// Bartlett-weighted long-run variance of the (demeaned) residuals:
// gamma_0 + 2 sum_{k<=l} (1 - k/(l+1)) gamma_k.
LongRunVariance long_run_variance(const Eigen::VectorXd& resid, int bandwidth);

// Standard schedule floor(4 (T/100)^{1/4}); satisfies l(T) -> inf, l = o(T).
inline int default_bandwidth(Eigen::Index n) {
  return static_cast<int>(4.0 * std::pow(static_cast<double>(n) / 100.0, 0.25));
}

}  // namespace trendstat
