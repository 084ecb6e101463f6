#pragma once

#include <stdexcept>

#include <Eigen/Core>
#include <Eigen/QR>

namespace trendstat {

// Which deterministic component is fitted. kappa_zero = true means no trend
// at all: the projection is the zero map and `order` is ignored.
struct TrendSpec {
  bool kappa_zero = true;
  int order = 0;  // polynomial order r, trend has r+1 coefficients

  static TrendSpec none() { return {true, 0}; }
  static TrendSpec poly(int r) { return {false, r}; }
};

inline constexpr int kDefaultMaxTrendOrder = 8;

// Regressor matrix on the normalized grid: entry (i, k) = ((k+1)/n)^i for
// rows i = 0..order and columns k = 0..n-1. The last column is all ones.
template <typename Scalar = double>
Eigen::MatrixX<Scalar> design_matrix(Eigen::Index n, int order) {
  if (order < 0) throw std::invalid_argument("design_matrix: negative order");
  if (n < order + 1) throw std::invalid_argument("underdetermined trend");
  Eigen::MatrixX<Scalar> x(order + 1, n);
  x.row(0).setOnes();
  if (order > 0) {
    for (Eigen::Index k = 0; k < n; ++k)
      x(1, k) = Scalar(k + 1) / Scalar(n);
    for (int i = 2; i <= order; ++i)
      x.row(i) = x.row(i - 1).cwiseProduct(x.row(1));
  }
  return x;
}

// Limit of the scaled Gram matrix R_T / T: entries 1/(i+j-1), size
// (order+1) x (order+1). Nonsingular for every order.
template <typename Scalar = double>
Eigen::MatrixX<Scalar> hilbert_limit(int order) {
  if (order < 0) throw std::invalid_argument("hilbert_limit: negative order");
  Eigen::MatrixX<Scalar> m(order + 1, order + 1);
  for (int i = 0; i < order + 1; ++i)
    for (int j = 0; j < order + 1; ++j)
      m(i, j) = Scalar(1) / Scalar(i + j + 1);
  return m;
}

struct OlsFit {
  Eigen::VectorXd alpha_hat;   // empty when no trend is fitted
  Eigen::VectorXd residuals;
  Eigen::MatrixXd gram;        // R_T = X X', empty when no trend is fitted
};

// Least squares fit of y on the polynomial design, solved through a
// Householder QR of X' rather than the normal equations; the monomial basis
// on [0,1] is mildly ill-conditioned from order ~6 up.
OlsFit ols_fit(const Eigen::VectorXd& y, const TrendSpec& trend);

// Repeated detrending against one fixed (n, order) design. Precomputes the
// thin Q factor once; residual() is then two matrix-vector products.
class TrendProjector {
 public:
  TrendProjector(Eigen::Index n, int order);

  Eigen::VectorXd residual(const Eigen::VectorXd& y) const {
    return y - q_ * (q_.transpose() * y);
  }

  Eigen::Index size() const { return q_.rows(); }
  int order() const { return static_cast<int>(q_.cols()) - 1; }

 private:
  Eigen::MatrixXd q_;  // n x (order+1), orthonormal columns
};

}  // namespace trendstat
