#include "trendstat/trend.hpp"

#include <cmath>

namespace trendstat {

OlsFit ols_fit(const Eigen::VectorXd& y, const TrendSpec& trend) {
  OlsFit fit;
  if (trend.kappa_zero) {
    // No trend: the projection is the zero map and the residual is y itself.
    fit.residuals = y;
    return fit;
  }
  const Eigen::Index n = y.size();
  const Eigen::MatrixXd x = design_matrix(n, trend.order);
  const Eigen::MatrixXd xt = x.transpose();

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xt);
  const Eigen::VectorXd rdiag = qr.matrixR().diagonal().cwiseAbs();
  const double rmax = rdiag.maxCoeff();
  const double rmin = rdiag.minCoeff();
  if (!(rmin > 0.0) || rmax / rmin > 1e12)
    throw std::runtime_error("ill-conditioned trend basis");

  fit.alpha_hat = qr.solve(y);
  fit.residuals = y - xt * fit.alpha_hat;
  fit.gram = x * xt;
  return fit;
}

TrendProjector::TrendProjector(Eigen::Index n, int order) {
  const Eigen::MatrixXd xt = design_matrix(n, order).transpose();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(xt);
  q_ = qr.householderQ() * Eigen::MatrixXd::Identity(n, order + 1);
}

}  // namespace trendstat
