#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

#include <Eigen/Core>

namespace trendstat {

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct NelderMeadOptions {
  int max_iterations = 500;
  double rel_tol = 1e-10;
  double initial_step = 0.1;
  // Called once per iteration with (iteration, best value so far).
  std::function<void(int, double)> trace;
};

// Derivative-free simplex search, standard reflection/expansion/contraction
// coefficients. Constraints are the objective's business (penalties or
// clamping); the search itself is unconstrained.
template <typename Fn>
NelderMeadResult nelder_mead(Fn&& f, const Eigen::VectorXd& x0,
                             const NelderMeadOptions& opt = {}) {
  const int dim = static_cast<int>(x0.size());
  const int m = dim + 1;
  std::vector<Eigen::VectorXd> pts(m, x0);
  std::vector<double> val(m);
  for (int i = 1; i < m; ++i) pts[i][i - 1] += opt.initial_step;
  for (int i = 0; i < m; ++i) val[i] = f(pts[i]);

  std::vector<int> ord(m);
  auto sort_simplex = [&]() {
    std::iota(ord.begin(), ord.end(), 0);
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return val[a] < val[b]; });
  };

  NelderMeadResult res;
  int iter = 0;
  for (; iter < opt.max_iterations; ++iter) {
    sort_simplex();
    const int best = ord[0], worst = ord[m - 1], second = ord[m - 2];
    if (opt.trace) opt.trace(iter, val[best]);

    if (std::abs(val[worst] - val[best]) <=
        opt.rel_tol * (std::abs(val[best]) + 1e-300)) {
      res.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < m; ++i)
      if (i != worst) centroid += pts[i];
    centroid /= dim;

    const Eigen::VectorXd refl = centroid + (centroid - pts[worst]);
    const double f_refl = f(refl);
    if (f_refl < val[ord[0]]) {
      const Eigen::VectorXd expa = centroid + 2.0 * (centroid - pts[worst]);
      const double f_expa = f(expa);
      if (f_expa < f_refl) {
        pts[worst] = expa;
        val[worst] = f_expa;
      } else {
        pts[worst] = refl;
        val[worst] = f_refl;
      }
      continue;
    }
    if (f_refl < val[second]) {
      pts[worst] = refl;
      val[worst] = f_refl;
      continue;
    }
    const Eigen::VectorXd contr = (f_refl < val[worst])
        ? Eigen::VectorXd(centroid + 0.5 * (refl - centroid))
        : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
    const double f_contr = f(contr);
    if (f_contr < std::min(f_refl, val[worst])) {
      pts[worst] = contr;
      val[worst] = f_contr;
      continue;
    }
    // Shrink toward the best vertex.
    for (int i = 0; i < m; ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
      val[i] = f(pts[i]);
    }
  }

  sort_simplex();
  res.x = pts[ord[0]];
  res.value = val[ord[0]];
  res.iterations = iter;
  return res;
}

}  // namespace trendstat
