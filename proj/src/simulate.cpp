#include "trendstat/simulate.hpp"

#include <limits>

#include <Eigen/Eigenvalues>

namespace trendstat {

Eigen::VectorXd draw_noise(const NoiseSpec& spec, Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("draw_noise: n must be >= 1");
  if (spec.sigma < 0.0) throw std::invalid_argument("draw_noise: negative sigma");
  if (spec.sigma == 0.0) return Eigen::VectorXd::Zero(n);
  RandomStream rng(spec.seed, spec.stream);
  return spec.sigma * rng.gaussian_vector(n);
}

double ar_min_root_modulus(const Eigen::VectorXd& theta) {
  const Eigen::Index p = theta.size();
  if (p == 0) return std::numeric_limits<double>::infinity();
  // Companion eigenvalues are the reciprocals of the AR polynomial roots
  // (zero eigenvalues correspond to roots at infinity).
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  companion.row(0) = theta.transpose();
  if (p > 1) companion.block(1, 0, p - 1, p - 1).setIdentity();
  const auto eigs = companion.eigenvalues();
  const double max_abs = eigs.cwiseAbs().maxCoeff();
  if (max_abs == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / max_abs;
}

void validate(const DgpConfig& cfg) {
  if (cfg.sample_size < 1)
    throw std::invalid_argument("simulate_dgp: sample_size must be >= 1");
  if (cfg.p != cfg.theta.size())
    throw std::invalid_argument("simulate_dgp: theta size does not match p");
  if (cfg.p > 0 && !ar_is_causal(cfg.theta))
    throw std::invalid_argument("noncausal AR");
  if (cfg.rho != 1 && cfg.rho != -1)
    throw std::invalid_argument("simulate_dgp: rho must be +1 or -1");
  if (cfg.d < 0) throw std::invalid_argument("simulate_dgp: negative d");
  if (cfg.d >= 2 && cfg.rho != 1)
    throw std::invalid_argument(
        "simulate_dgp: d >= 2 is only supported with rho = +1");
  if (!cfg.kappa_zero) {
    if (cfg.trend_order < 0)
      throw std::invalid_argument("simulate_dgp: negative trend order");
    if (cfg.trend_coef.size() != cfg.trend_order + 1)
      throw std::invalid_argument(
          "simulate_dgp: trend_coef size does not match trend order");
  }
  if (cfg.burn_in < 0)
    throw std::invalid_argument("simulate_dgp: negative burn_in");
}

TimeSeries simulate_dgp(const DgpConfig& cfg) {
  validate(cfg);
  const Eigen::Index T = cfg.sample_size;
  const Eigen::Index b = cfg.burn_in;
  const int p = cfg.p;

  // Burn-in warms only the stationary AR part; the walk starts at zero and
  // the trend applies at t = 1..T, both exactly as in the zero-presample
  // convention when b = 0.
  const Eigen::VectorXd eps = draw_noise(cfg.eps_noise, T + b);

  Eigen::VectorXd walk;
  if (cfg.d >= 1) {
    const Eigen::VectorXd eta = draw_noise(cfg.eta_noise, T);
    walk = (cfg.d == 1) ? random_walk(eta, cfg.rho) : integrated_walk(eta, cfg.d);
  }

  Eigen::VectorXd y = Eigen::VectorXd::Zero(T + b);
  for (Eigen::Index t = 0; t < T + b; ++t) {
    double v = eps[t];
    for (int i = 1; i <= p; ++i)
      if (t - i >= 0) v += cfg.theta[i - 1] * y[t - i];
    if (t >= b) {
      const Eigen::Index tt = t - b;  // 0-based index into the kept sample
      if (cfg.d >= 1) v += walk[tt];
      if (!cfg.kappa_zero) {
        const double u = static_cast<double>(tt + 1) / static_cast<double>(T);
        double acc = 0.0;
        for (Eigen::Index j = cfg.trend_coef.size() - 1; j >= 0; --j)
          acc = acc * u + cfg.trend_coef[j];
        v += acc;
      }
    }
    y[t] = v;
  }

  TimeSeries out;
  out.values = y.tail(T);
  out.source = "simulate_dgp";
  return out;
}

}  // namespace trendstat
