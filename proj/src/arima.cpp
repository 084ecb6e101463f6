#include "trendstat/arima.hpp"

#include <cmath>

#include <Eigen/QR>

#include "trendstat/nelder_mead.hpp"

namespace trendstat {

double css_objective(const Eigen::VectorXd& w, const Eigen::VectorXd& theta,
                     double beta) {
  const Eigen::Index n = w.size();
  const Eigen::Index p = theta.size();
  double prev_e = 0.0;
  long double acc = 0.0L;
  for (Eigen::Index t = 0; t < n; ++t) {
    double e = w[t];
    for (Eigen::Index i = 1; i <= p && t - i >= 0; ++i)
      e -= theta[i - 1] * w[t - i];
    e -= beta * prev_e;
    acc += static_cast<long double>(e) * e;
    prev_e = e;
  }
  return static_cast<double>(acc);
}

namespace {

// Scales theta_i by c^i, which scales every AR root modulus by 1/c. Used to
// pull a noncausal iterate back inside the causal region.
Eigen::VectorXd shrink_to_causal(const Eigen::VectorXd& theta, double margin) {
  Eigen::VectorXd out = theta;
  double c = 1.0;
  while (!ar_is_causal(out, margin) && c > 1e-6) {
    c *= 0.95;
    for (Eigen::Index i = 0; i < theta.size(); ++i)
      out[i] = theta[i] * std::pow(c, static_cast<double>(i + 1));
  }
  return out;
}

// Least squares regression of w_t on its first p lags; a cheap starting
// point for the simplex search.
Eigen::VectorXd ar_ls_start(const Eigen::VectorXd& w, int p) {
  const Eigen::Index n = w.size();
  Eigen::MatrixXd lags(n - p, p);
  for (int i = 0; i < p; ++i)
    lags.col(i) = w.segment(p - 1 - i, n - p);
  const Eigen::VectorXd rhs = w.tail(n - p);
  return lags.householderQr().solve(rhs);
}

double lag1_autocorr(const Eigen::VectorXd& e) {
  const Eigen::Index n = e.size();
  const double denom = e.squaredNorm();
  if (denom == 0.0 || n < 2) return 0.0;
  return e.head(n - 1).dot(e.tail(n - 1)) / denom;
}

// Invertible MA(1) coefficient matching a lag-one autocorrelation r, i.e.
// the root of r b^2 - b + r = 0 inside [-1, 1].
double beta_from_autocorr(double r) {
  if (std::abs(r) < 1e-12) return 0.0;
  if (std::abs(r) >= 0.5) return r > 0 ? 0.98 : -0.98;
  return (1.0 - std::sqrt(1.0 - 4.0 * r * r)) / (2.0 * r);
}

}  // namespace

ArimaFit fit_arima(const TimeSeries& y, int p, const TrendSpec& trend, int rho,
                   const CssOptions& options) {
  if (p < 0) throw std::invalid_argument("fit_arima: negative p");
  const int r = trend.kappa_zero ? 0 : trend.order;
  if (y.size() < p + r + 10)
    throw std::invalid_argument("fit_arima: series too short for p and trend");

  const Eigen::VectorXd z = difference(y.values, rho);
  const OlsFit detrended = ols_fit(z, trend);
  const Eigen::VectorXd& w = detrended.residuals;
  const Eigen::Index n = w.size();

  constexpr double causal_margin = 1e-8;
  constexpr double penalty_scale = 1e6;

  // Parameter vector is (theta_1..theta_p, beta). beta lives in [-1, 1] via
  // clamping plus a quadratic penalty that restores slope outside the box;
  // theta gets the same treatment against the causal boundary.
  auto objective = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd theta = x.head(p);
    double beta = x[p];
    double penalty = 0.0;
    if (beta > 1.0) {
      penalty += penalty_scale * (beta - 1.0) * (beta - 1.0);
      beta = 1.0;
    } else if (beta < -1.0) {
      penalty += penalty_scale * (beta + 1.0) * (beta + 1.0);
      beta = -1.0;
    }
    if (p > 0 && !ar_is_causal(theta, causal_margin)) {
      const Eigen::VectorXd proj = shrink_to_causal(theta, causal_margin);
      penalty += penalty_scale * (1.0 + (theta - proj).squaredNorm());
      theta = proj;
    }
    return css_objective(w, theta, beta) + penalty;
  };

  Eigen::VectorXd x0(p + 1);
  Eigen::VectorXd theta0 =
      p > 0 ? shrink_to_causal(ar_ls_start(w, p), 1e-2) : Eigen::VectorXd();
  x0.head(p) = theta0;
  x0[p] = beta_from_autocorr(lag1_autocorr(ar_filter(w, theta0)));

  NelderMeadOptions nm;
  nm.max_iterations = options.max_iterations;
  nm.rel_tol = options.rel_tol;
  nm.trace = options.trace;
  const NelderMeadResult best = nelder_mead(objective, x0, nm);

  ArimaFit fit;
  fit.theta_check = best.x.head(p);
  fit.beta_check = std::clamp(best.x[p], -1.0, 1.0);
  if (p > 0 && !ar_is_causal(fit.theta_check, causal_margin)) {
    fit.theta_check = shrink_to_causal(fit.theta_check, causal_margin);
    fit.causality_projected = true;
  }
  fit.css = css_objective(w, fit.theta_check, fit.beta_check);
  fit.sigma_xi2 = fit.css / static_cast<double>(n);
  fit.gamma_hat = detrended.alpha_hat;
  fit.converged = best.converged;
  fit.iterations = best.iterations;
  return fit;
}

LongRunVariance long_run_variance(const Eigen::VectorXd& resid, int bandwidth) {
  const Eigen::Index n = resid.size();
  if (bandwidth < 1 || bandwidth >= n)
    throw std::invalid_argument("long_run_variance: bandwidth must be in [1, T)");
  const Eigen::VectorXd c = resid.array() - resid.mean();
  const double gamma0 = c.squaredNorm() / static_cast<double>(n);
  if (gamma0 == 0.0) throw std::runtime_error("degenerate residuals");
  double value = gamma0;
  for (int k = 1; k <= bandwidth; ++k) {
    const double gk = c.head(n - k).dot(c.tail(n - k)) / static_cast<double>(n);
    value += 2.0 * (1.0 - static_cast<double>(k) / (bandwidth + 1.0)) * gk;
  }
  return {value, bandwidth, LrvKernel::bartlett};
}

}  // namespace trendstat
