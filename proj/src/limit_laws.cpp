#include "trendstat/limit_laws.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <memory>

namespace trendstat {

std::string to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::h0: return "H0";
    case Hypothesis::h1_plus: return "H1_plus";
    case Hypothesis::h1_minus_notrend: return "H1_minus_notrend";
  }
  throw std::logic_error("unknown hypothesis");
}

Hypothesis hypothesis_from_string(const std::string& s) {
  if (s == "H0") return Hypothesis::h0;
  if (s == "H1_plus") return Hypothesis::h1_plus;
  if (s == "H1_minus_notrend") return Hypothesis::h1_minus_notrend;
  throw std::invalid_argument("unknown hypothesis '" + s + "'");
}

std::string FunctionalId::key() const {
  std::string k = to_string(hypothesis);
  k += kappa_zero ? "_kappa0" : "_poly" + std::to_string(r);
  if (hypothesis == Hypothesis::h1_plus) k += "_d" + std::to_string(d);
  return k;
}

double wiener_square_integral(const Eigen::VectorXd& z) {
  const Eigen::Index n = z.size();
  long double run = 0.0L, energy = 0.0L;
  for (Eigen::Index t = 0; t < n; ++t) {
    run += z[t];
    energy += run * run;
  }
  return static_cast<double>(energy / (static_cast<long double>(n) *
                                       static_cast<long double>(n)));
}

double h0_functional(const Eigen::VectorXd& z, const TrendProjector* proj) {
  if (proj == nullptr) return wiener_square_integral(z);
  return wiener_square_integral(proj->residual(z));
}

double h1_plus_functional(const Eigen::VectorXd& eta, int d,
                          const TrendProjector* proj) {
  const Eigen::Index n = eta.size();
  Eigen::VectorXd walk = integrated_walk(eta, d);
  const Eigen::VectorXd resid = proj ? proj->residual(walk) : std::move(walk);

  long double run = 0.0L, num = 0.0L, den = 0.0L;
  for (Eigen::Index t = 0; t < n; ++t) {
    const long double e = resid[t];
    run += e;
    num += run * run;
    den += e * e;
  }
  // num / n^{2d+2} over den / n^{2d}; the walk scale cancels in the ratio.
  return static_cast<double>(num / (static_cast<long double>(n) *
                                    static_cast<long double>(n) * den));
}

namespace {

void check_grid(Eigen::Index grid_T) {
  if (grid_T < kMinFunctionalGrid)
    throw std::invalid_argument("functional sampler: grid_T must be >= 200");
}

}  // namespace

double sample_h0_functional(const FunctionalId& id, Eigen::Index grid_T,
                            std::uint64_t seed, std::uint64_t rep) {
  check_grid(grid_T);
  RandomStream rng(seed, rep);
  const Eigen::VectorXd z = rng.gaussian_vector(grid_T);
  if (id.kappa_zero) return h0_functional(z, nullptr);
  const TrendProjector proj(grid_T, id.r);
  return h0_functional(z, &proj);
}

double sample_h1_plus_functional(const FunctionalId& id, Eigen::Index grid_T,
                                 std::uint64_t seed, std::uint64_t rep) {
  check_grid(grid_T);
  if (id.d < 1)
    throw std::invalid_argument("functional sampler: d must be >= 1");
  RandomStream rng(seed, rep);
  const Eigen::VectorXd eta = rng.gaussian_vector(grid_T);
  if (id.kappa_zero) return h1_plus_functional(eta, id.d, nullptr);
  const TrendProjector proj(grid_T, id.r);
  return h1_plus_functional(eta, id.d, &proj);
}

double sample_prop1_functional(double sigma_eps, double sigma_eta,
                               Eigen::Index grid_T, std::uint64_t seed,
                               std::uint64_t rep) {
  check_grid(grid_T);
  if (!(sigma_eta > 0.0))
    throw std::invalid_argument("prop1 sampler: sigma_eta must be > 0");
  RandomStream rng(seed, rep);
  const double a = wiener_square_integral(rng.gaussian_vector(grid_T));
  const double b = wiener_square_integral(rng.gaussian_vector(grid_T));
  const double se2 = sigma_eps * sigma_eps;
  const double sn2 = sigma_eta * sigma_eta;
  return (2.0 * se2 * a + sn2 * b) / (2.0 * sn2 * b);
}

double sample_functional(const FunctionalId& id, Eigen::Index grid_T,
                         std::uint64_t seed, std::uint64_t rep) {
  switch (id.hypothesis) {
    case Hypothesis::h0:
      return sample_h0_functional(id, grid_T, seed, rep);
    case Hypothesis::h1_plus:
      return sample_h1_plus_functional(id, grid_T, seed, rep);
    case Hypothesis::h1_minus_notrend:
      return sample_prop1_functional(1.0, 1.0, grid_T, seed, rep);
  }
  throw std::logic_error("unknown hypothesis");
}

double empirical_quantile(const std::vector<double>& sorted, double prob) {
  if (sorted.empty())
    throw std::invalid_argument("empirical_quantile: no draws");
  const double h = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

const std::vector<double>& default_probability_grid() {
  static const std::vector<double> grid = {0.01, 0.025, 0.05, 0.10, 0.50,
                                           0.90, 0.95, 0.975, 0.99};
  return grid;
}

QuantileTable build_table(const FunctionalId& id, Eigen::Index grid_T,
                          long n_rep, std::uint64_t seed,
                          const std::vector<double>& probs, unsigned workers) {
  if (n_rep < 1000)
    throw std::invalid_argument("build_table: n_rep must be >= 1000");
  check_grid(grid_T);

  // Shared projector: the per-draw QR would otherwise dominate the build.
  std::unique_ptr<const TrendProjector> proj;
  if (!id.kappa_zero && id.hypothesis != Hypothesis::h1_minus_notrend)
    proj = std::make_unique<TrendProjector>(grid_T, id.r);

  auto draw = [&](std::uint64_t rep) -> double {
    RandomStream rng(seed, rep);
    switch (id.hypothesis) {
      case Hypothesis::h0:
        return h0_functional(rng.gaussian_vector(grid_T), proj.get());
      case Hypothesis::h1_plus:
        return h1_plus_functional(rng.gaussian_vector(grid_T), id.d, proj.get());
      case Hypothesis::h1_minus_notrend: {
        const double a = wiener_square_integral(rng.gaussian_vector(grid_T));
        const double b = wiener_square_integral(rng.gaussian_vector(grid_T));
        return (2.0 * a + b) / (2.0 * b);
      }
    }
    throw std::logic_error("unknown hypothesis");
  };
  QuantileTable table = build_table_with(draw, id, grid_T, n_rep, seed, probs, workers);

  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  table.created_at = buf;
  return table;
}

LookupResult lookup(const QuantileTable& table, double prob) {
  if (table.quantiles.empty()) throw std::invalid_argument("lookup: empty table");
  if (!(prob > 0.0 && prob < 1.0))
    throw std::invalid_argument("lookup: prob must lie in (0, 1)");
  const auto& q = table.quantiles;
  if (prob <= q.front().first) return {q.front().second, prob < q.front().first};
  if (prob >= q.back().first) return {q.back().second, prob > q.back().first};
  for (std::size_t i = 1; i < q.size(); ++i) {
    if (prob <= q[i].first) {
      const auto& [p0, v0] = q[i - 1];
      const auto& [p1, v1] = q[i];
      const double frac = (prob - p0) / (p1 - p0);
      return {v0 + frac * (v1 - v0), false};
    }
  }
  return {q.back().second, true};  // unreachable
}

}  // namespace trendstat
