#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "trendstat/random.hpp"

namespace trendstat {

// A real-valued series plus where it came from.
struct TimeSeries {
  Eigen::VectorXd values;
  std::string source;

  Eigen::Index size() const { return values.size(); }
};

enum class NoiseKind { gaussian };

struct NoiseSpec {
  double sigma = 1.0;
  NoiseKind kind = NoiseKind::gaussian;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// sigma = 0 yields the all-zero sequence without touching the generator.
Eigen::VectorXd draw_noise(const NoiseSpec& spec, Eigen::Index n);

// S_t = rho * S_{t-1} + eta_t with S_0 = 0. rho = +1 is the cumulative sum,
// rho = -1 the alternating (sign-flipping) walk.
template <typename Derived>
Eigen::VectorX<typename Derived::Scalar> random_walk(
    const Eigen::MatrixBase<Derived>& eta, int rho) {
  using Scalar = typename Derived::Scalar;
  if (rho != 1 && rho != -1)
    throw std::invalid_argument("random_walk: rho must be +1 or -1");
  Eigen::VectorX<Scalar> s(eta.size());
  Scalar prev = Scalar(0);
  for (Eigen::Index t = 0; t < eta.size(); ++t) {
    prev = Scalar(rho) * prev + eta[t];
    s[t] = prev;
  }
  return s;
}

// d-fold iterated cumulative sum, all initial values zero. d = 0 is rejected;
// callers wanting the raw noise should use it directly.
template <typename Derived>
Eigen::VectorX<typename Derived::Scalar> integrated_walk(
    const Eigen::MatrixBase<Derived>& eta, int d) {
  using Scalar = typename Derived::Scalar;
  if (d < 1) throw std::invalid_argument("integrated_walk: d must be >= 1");
  Eigen::VectorX<Scalar> s = eta;
  for (int level = 0; level < d; ++level) {
    Scalar acc = Scalar(0);
    for (Eigen::Index t = 0; t < s.size(); ++t) {
      acc += s[t];
      s[t] = acc;
    }
  }
  return s;
}

// Full generating process: AR(p) recursion with zero presample, polynomial
// trend of order r on the grid t/T (present iff kappa != 0), a d-fold random
// walk with unit root at rho, and additive noise.
struct DgpConfig {
  int p = 0;
  Eigen::VectorXd theta;        // p AR coefficients
  bool kappa_zero = true;
  int trend_order = 0;          // r
  Eigen::VectorXd trend_coef;   // r+1 coefficients, ignored when kappa_zero
  int rho = 1;                  // +1 or -1, unit-root location of the walk
  int d = 0;                    // integration order; 0 = no walk (null case)
  NoiseSpec eps_noise;          // observation noise, sigma > 0 in the model
  NoiseSpec eta_noise;          // walk innovations, irrelevant when d = 0
  Eigen::Index sample_size = 0; // T
  Eigen::Index burn_in = 0;     // extra presample steps for the AR filter

  // Convenience for Monte Carlo: same process, substreams re-keyed so that
  // replication `rep` is independent of every other and of worker order.
  DgpConfig with_replication(std::uint64_t rep) const {
    DgpConfig c = *this;
    c.eps_noise.stream = 2 * rep;
    c.eta_noise.stream = 2 * rep + 1;
    return c;
  }
};

// Smallest modulus among the roots of 1 - theta_1 z - ... - theta_p z^p,
// computed from companion-matrix eigenvalues. Returns +inf for p = 0.
double ar_min_root_modulus(const Eigen::VectorXd& theta);

inline bool ar_is_causal(const Eigen::VectorXd& theta, double margin = 1e-8) {
  return ar_min_root_modulus(theta) > 1.0 + margin;
}

void validate(const DgpConfig& cfg);

TimeSeries simulate_dgp(const DgpConfig& cfg);

}  // namespace trendstat
