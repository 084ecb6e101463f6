// Command-line front end: run the stationarity test on a CSV series,
// replicate the rejection-rate experiments, dump limit-law histograms, and
// manage the quantile-table cache.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "trendstat/csv.hpp"
#include "trendstat/decision.hpp"
#include "trendstat/experiment.hpp"
#include "trendstat/table_cache.hpp"

using json = nlohmann::ordered_json;
using namespace trendstat;

namespace {

constexpr int kSchemaVersion = 1;
constexpr int kExitAccept = 0;
constexpr int kExitError = 1;
constexpr int kExitReject = 2;

struct TableFlags {
  std::string null_kind = "kappa0";  // kappa0 | poly
  int r = 0;
  int d = 1;
  std::string hypothesis = "h0";  // h0 | h1plus | prop1
  long grid_T = kDefaultTableGrid;
  long n_rep = kDefaultTableReps;
  std::uint64_t seed = 1789;

  FunctionalId id() const {
    FunctionalId out;
    if (hypothesis == "h0") out.hypothesis = Hypothesis::h0;
    else if (hypothesis == "h1plus") out.hypothesis = Hypothesis::h1_plus;
    else if (hypothesis == "prop1") out.hypothesis = Hypothesis::h1_minus_notrend;
    else throw CLI::ValidationError("--hypothesis must be h0, h1plus or prop1");
    out.kappa_zero = null_kind == "kappa0";
    if (!out.kappa_zero && r > kDefaultMaxTrendOrder)
      throw std::invalid_argument("trend order above supported maximum (" +
                                  std::to_string(kDefaultMaxTrendOrder) + ")");
    out.r = out.kappa_zero ? 0 : r;
    out.d = d;
    return out;
  }
};

void add_table_flags(CLI::App* cmd, TableFlags& flags, bool with_hypothesis) {
  cmd->add_option("--null", flags.null_kind, "Null trend: kappa0 or poly")
      ->check(CLI::IsMember({"kappa0", "poly"}));
  cmd->add_option("--r", flags.r, "Polynomial trend order");
  cmd->add_option("--d", flags.d, "Integration order (h1plus tables)");
  if (with_hypothesis)
    cmd->add_option("--hypothesis", flags.hypothesis,
                    "Functional family: h0, h1plus or prop1");
  cmd->add_option("--grid-T", flags.grid_T, "Discretization length");
  cmd->add_option("--n-rep", flags.n_rep, "Monte Carlo replications");
  cmd->add_option("--seed", flags.seed, "Table seed");
}

json table_json(const QuantileTable& table) {
  json out;
  out["functional"] = to_string(table.id.hypothesis);
  out["kappa_zero"] = table.id.kappa_zero;
  out["r"] = table.id.r;
  out["d"] = table.id.d;
  out["grid_T"] = table.grid_T;
  out["n_rep"] = table.n_rep;
  out["seed"] = table.seed;
  out["mean"] = table.mean;
  return out;
}

// ---------------------------------------------------------------------------
// trendstat test
// ---------------------------------------------------------------------------

int cmd_test(const std::string& csv_path, int p, const std::string& trend_kind,
             int r, const std::string& rule_name, double alpha,
             const TableFlags& tbl, unsigned workers) {
  const TrendSpec trend =
      trend_kind == "none" ? TrendSpec::none() : TrendSpec::poly(r);
  if (!trend.kappa_zero && trend.order > kDefaultMaxTrendOrder)
    throw std::invalid_argument("trend order above supported maximum (" +
                                std::to_string(kDefaultMaxTrendOrder) + ")");
  const Rule rule = rule_from_string(rule_name);

  const TimeSeries series = ingest_csv(csv_path, &std::cerr);

  FunctionalId id;
  id.hypothesis = Hypothesis::h0;
  id.kappa_zero = trend.kappa_zero;
  id.r = trend.kappa_zero ? 0 : trend.order;
  const TableCache cache;
  bool cached = false;
  const QuantileTable table =
      ensure_table(cache, id, tbl.grid_T, tbl.n_rep, tbl.seed, workers, &cached);

  const auto [stat, fit] = run_test_pipeline(series, p, trend);
  const TestReport report = decide(stat, table, trend, rule, alpha);
  const ApproxPValue pv = approximate_p_value(stat, table, rule);

  json out;
  out["schema_version"] = kSchemaVersion;
  out["series"] = {{"path", series.source}, {"length", series.size()}};
  out["settings"] = {{"p", p},
                     {"trend", trend_kind},
                     {"r", trend.kappa_zero ? json(nullptr) : json(trend.order)},
                     {"rule", rule_name},
                     {"alpha", alpha}};
  json fitj;
  if (p > 0) {
    fitj["theta"] = std::vector<double>(fit.arima.theta_check.begin(),
                                        fit.arima.theta_check.end());
    fitj["beta"] = fit.arima.beta_check;
    fitj["sigma_xi2"] = fit.arima.sigma_xi2;
    fitj["converged"] = fit.arima.converged;
    fitj["iterations"] = fit.arima.iterations;
    fitj["causality_projected"] = fit.arima.causality_projected;
  } else {
    fitj["theta"] = json::array();
    fitj["beta"] = nullptr;
    fitj["note"] = "p = 0: ARMA stage skipped";
  }
  if (!trend.kappa_zero)
    fitj["alpha_hat"] = std::vector<double>(fit.ols.alpha_hat.begin(),
                                            fit.ols.alpha_hat.end());
  out["fit"] = fitj;
  out["statistic"] = {{"k_hat", stat.k_hat},
                      {"k_over_T", stat.k_over_T},
                      {"T_times_k", stat.T_times_k},
                      {"Q_T", stat.q_total}};
  json dec;
  dec["reject"] = report.reject;
  dec["direction"] = to_string(report.direction);
  dec["lower_cut"] = report.lower_cut ? json(*report.lower_cut) : json(nullptr);
  dec["upper_cut"] = report.upper_cut ? json(*report.upper_cut) : json(nullptr);
  dec["p_value"] = pv.value;
  dec["p_value_interpolated"] = true;
  if (pv.grid_edge) dec["p_value_note"] = "beyond stored grid, clamped";
  json consulted = json::array();
  for (const auto& [prob, value] : report.quantiles_consulted)
    consulted.push_back({{"prob", prob}, {"value", value}});
  dec["quantiles_consulted"] = consulted;
  out["decision"] = dec;
  out["table"] = table_json(table);
  out["table"]["cache_hit"] = cached;

  std::cout << out.dump(2) << '\n';
  return report.reject ? kExitReject : kExitAccept;
}

// ---------------------------------------------------------------------------
// trendstat replicate
// ---------------------------------------------------------------------------

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  long row = 0;
  while (std::getline(in, line)) {
    ++row;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw std::runtime_error(path + ": malformed line " + std::to_string(row));
      continue;
    }
    auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    kv[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
  }
  return kv;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

ExperimentConfig config_from_file(const std::string& path, TableFlags& tbl) {
  const auto kv = parse_kv_file(path);
  auto get = [&](const std::string& key, const std::string& fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  };

  ExperimentConfig cfg;
  cfg.dgp.sample_size = std::stol(get("T", "300"));
  cfg.dgp.p = std::stoi(get("p", "0"));
  if (const std::string theta = get("theta", ""); !theta.empty()) {
    const auto parts = split_list(theta);
    cfg.dgp.theta.resize(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i)
      cfg.dgp.theta[static_cast<Eigen::Index>(i)] = std::stod(parts[i]);
  }
  const std::string trend = get("trend", "none");
  cfg.dgp.kappa_zero = trend == "none";
  cfg.dgp.trend_order = std::stoi(get("r", "0"));
  if (!cfg.dgp.kappa_zero) {
    cfg.dgp.trend_coef = Eigen::VectorXd::Zero(cfg.dgp.trend_order + 1);
    if (const std::string coef = get("trend_coef", ""); !coef.empty()) {
      const auto parts = split_list(coef);
      if (static_cast<int>(parts.size()) != cfg.dgp.trend_order + 1)
        throw std::runtime_error("trend_coef must list r + 1 values");
      for (std::size_t i = 0; i < parts.size(); ++i)
        cfg.dgp.trend_coef[static_cast<Eigen::Index>(i)] = std::stod(parts[i]);
    }
  }
  cfg.dgp.d = std::stoi(get("d", "1"));
  cfg.dgp.eps_noise.sigma = std::stod(get("sigma_eps", "1"));
  cfg.dgp.eta_noise.sigma = std::stod(get("sigma_eta", "1"));
  cfg.n_rep = std::stol(get("n_rep", "2000"));
  cfg.alpha = std::stod(get("alpha", "0.05"));
  cfg.seed = std::stoull(get("seed", "42"));
  cfg.kpss_bandwidth = std::stoi(get("kpss_bandwidth", "0"));
  cfg.output_path = get("output", "");
  if (const unsigned w = static_cast<unsigned>(std::stoul(get("workers", "0"))))
    cfg.workers = w;
  if (const std::string procs = get("procedures", ""); !procs.empty()) {
    cfg.procedures.clear();
    for (const auto& name : split_list(procs))
      cfg.procedures.push_back(procedure_from_string(name));
  }
  if (const std::string scen = get("scenarios", ""); !scen.empty()) {
    cfg.scenarios.clear();
    for (const auto& name : split_list(scen)) {
      if (name == "H0") cfg.scenarios.push_back(Scenario::h0);
      else if (name == "H1_plus") cfg.scenarios.push_back(Scenario::h1_plus);
      else if (name == "H1_minus") cfg.scenarios.push_back(Scenario::h1_minus);
      else throw std::runtime_error("unknown scenario '" + name + "'");
    }
  }
  tbl.null_kind = cfg.dgp.kappa_zero ? "kappa0" : "poly";
  tbl.r = cfg.dgp.trend_order;
  tbl.grid_T = std::stol(get("table_grid_T", std::to_string(kDefaultTableGrid)));
  tbl.n_rep = std::stol(get("table_n_rep", std::to_string(kDefaultTableReps)));
  tbl.seed = std::stoull(get("table_seed", "1789"));
  return cfg;
}

int cmd_replicate(const std::string& config_path, std::uint64_t* seed_override) {
  TableFlags tbl;
  ExperimentConfig cfg = config_from_file(config_path, tbl);
  if (seed_override) cfg.seed = *seed_override;

  const TableCache cache;
  const QuantileTable table = ensure_table(cache, tbl.id(), tbl.grid_T,
                                           tbl.n_rep, tbl.seed, cfg.workers);
  const StudyReport report = run_replication_study(cfg, table);

  // Aligned text: scenarios down, procedures across.
  std::printf("Rejection rates (alpha=%.3g, T=%ld, n_rep=%ld, seed=%llu)\n",
              report.alpha, static_cast<long>(report.sample_size),
              report.n_rep, static_cast<unsigned long long>(report.seed));
  std::printf("%-10s", "");
  for (Procedure p : cfg.procedures)
    std::printf("%14s", to_string(p).c_str());
  std::printf("\n");
  for (Scenario s : cfg.scenarios) {
    std::printf("%-10s", to_string(s).c_str());
    for (Procedure p : cfg.procedures) {
      const RateCell& cell = report.cell(s, p);
      std::printf("  %6.2f%%±%4.2f", 100.0 * cell.rate(),
                  100.0 * cell.stderr_rate());
    }
    std::printf("\n");
  }

  json out;
  out["schema_version"] = kSchemaVersion;
  out["alpha"] = report.alpha;
  out["T"] = report.sample_size;
  out["n_rep"] = report.n_rep;
  out["seed"] = report.seed;
  out["kpss_bandwidth"] = report.kpss_bandwidth;
  out["table"] = table_json(table);
  json cells = json::array();
  for (const auto& cell : report.cells)
    cells.push_back({{"scenario", to_string(cell.scenario)},
                     {"procedure", to_string(cell.procedure)},
                     {"n_reject", cell.n_reject},
                     {"n_rep", cell.n_rep},
                     {"rate", cell.rate()},
                     {"stderr", cell.stderr_rate()}});
  out["cells"] = cells;

  if (!cfg.output_path.empty()) {
    std::ofstream js(cfg.output_path, std::ios::trunc);
    if (!js) throw std::runtime_error("cannot write " + cfg.output_path);
    js << out.dump(2) << '\n';
  } else {
    std::cout << out.dump(2) << '\n';
  }
  return kExitAccept;
}

// ---------------------------------------------------------------------------
// trendstat hist
// ---------------------------------------------------------------------------

int cmd_histogram(const TableFlags& tbl, int bins, unsigned workers) {
  if (bins < 1) throw std::invalid_argument("hist: bins must be >= 1");
  if (tbl.n_rep < 1) throw std::invalid_argument("hist: n-rep must be >= 1");
  const FunctionalId id = tbl.id();
  std::vector<double> draws(static_cast<std::size_t>(tbl.n_rep));
  parallel_for_index(draws.size(), workers, [&](std::size_t i) {
    draws[i] = sample_functional(id, tbl.grid_T, tbl.seed, i);
  });
  const auto [lo_it, hi_it] = std::minmax_element(draws.begin(), draws.end());
  const double lo = *lo_it, hi = *hi_it;
  const double width = (hi > lo) ? (hi - lo) / bins : 1.0;
  std::vector<long> count(static_cast<std::size_t>(bins), 0);
  for (double v : draws) {
    auto b = static_cast<long>((v - lo) / width);
    b = std::clamp<long>(b, 0, bins - 1);
    ++count[static_cast<std::size_t>(b)];
  }
  std::printf("bin_left,bin_right,frequency\n");
  for (int b = 0; b < bins; ++b)
    std::printf("%.17g,%.17g,%.17g\n", lo + b * width, lo + (b + 1) * width,
                static_cast<double>(count[static_cast<std::size_t>(b)]) /
                    static_cast<double>(draws.size()));
  return kExitAccept;
}

// ---------------------------------------------------------------------------
// trendstat table build|list|show
// ---------------------------------------------------------------------------

int cmd_table_build(const TableFlags& tbl, unsigned workers) {
  const TableCache cache;
  bool cached = false;
  const QuantileTable table = ensure_table(cache, tbl.id(), tbl.grid_T,
                                           tbl.n_rep, tbl.seed, workers, &cached);
  std::cout << (cached ? "cache hit: " : "built: ")
            << cache.file_for(table.id, table.grid_T, table.n_rep, table.seed)
                   .string()
            << '\n';
  return kExitAccept;
}

int cmd_table_list() {
  const TableCache cache;
  for (const auto& path : cache.list()) {
    try {
      std::ifstream in(path, std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      const QuantileTable t = parse_table(ss.str());
      std::printf("%-40s grid_T=%-6ld n_rep=%-8ld seed=%llu mean=%.6g\n",
                  t.id.key().c_str(), static_cast<long>(t.grid_T), t.n_rep,
                  static_cast<unsigned long long>(t.seed), t.mean);
    } catch (const std::exception& e) {
      std::printf("%-40s UNREADABLE (%s)\n", path.filename().string().c_str(),
                  e.what());
    }
  }
  return kExitAccept;
}

int cmd_table_show(const TableFlags& tbl) {
  const TableCache cache;
  const auto table = cache.load(tbl.id(), tbl.grid_T, tbl.n_rep, tbl.seed);
  if (!table) throw std::runtime_error("table not built");
  std::cout << serialize_table(*table);
  return kExitAccept;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationarity testing against integration for AR processes "
               "with polynomial trend"};
  app.require_subcommand(1);

  // test
  auto* test = app.add_subcommand("test", "Run the stationarity test on a CSV series");
  std::string csv_path, trend_kind = "none", rule_name = "classic";
  int p = 0, r = 0;
  double alpha = 0.05;
  unsigned workers = 0;
  TableFlags test_tbl;
  test->add_option("csv", csv_path, "Input series, one value per row")->required();
  test->add_option("--p", p, "AR order (0 skips the ARMA stage)");
  test->add_option("--trend", trend_kind, "none or poly")
      ->check(CLI::IsMember({"none", "poly"}));
  test->add_option("--r", r, "Polynomial trend order");
  test->add_option("--rule", rule_name, "classic, corrected, upper or lower")
      ->check(CLI::IsMember({"classic", "corrected", "upper", "lower"}));
  test->add_option("--alpha", alpha, "Significance level in (0, 0.5)");
  test->add_option("--grid-T", test_tbl.grid_T, "Null-table grid length");
  test->add_option("--table-n-rep", test_tbl.n_rep, "Null-table replications");
  test->add_option("--seed", test_tbl.seed, "Null-table seed");
  test->add_option("--workers", workers, "Worker threads (0 = hardware)");

  // replicate
  auto* repl = app.add_subcommand("replicate", "Rejection-rate experiment from a config file");
  std::string config_path;
  std::uint64_t repl_seed = 0;
  repl->add_option("--config", config_path, "key=value config file")->required();
  auto* repl_seed_opt =
      repl->add_option("--seed", repl_seed, "Master seed (overrides the config)");

  // hist
  auto* hist = app.add_subcommand("hist", "Histogram of a limiting functional as CSV");
  TableFlags hist_tbl;
  int bins = 60;
  unsigned hist_workers = 0;
  add_table_flags(hist, hist_tbl, true);
  hist->add_option("--bins", bins, "Number of bins");
  hist->add_option("--workers", hist_workers, "Worker threads (0 = hardware)");

  // table
  auto* tablecmd = app.add_subcommand("table", "Quantile-table cache management");
  tablecmd->require_subcommand(1);
  TableFlags tbl;
  unsigned tbl_workers = 0;
  auto* build = tablecmd->add_subcommand("build", "Build (or reuse) a table");
  add_table_flags(build, tbl, true);
  build->add_option("--workers", tbl_workers, "Worker threads (0 = hardware)");
  auto* list = tablecmd->add_subcommand("list", "List cached tables");
  auto* show = tablecmd->add_subcommand("show", "Print one cached table");
  add_table_flags(show, tbl, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints the message / help text
    return code == 0 ? 0 : kExitError;
  }

  try {
    const unsigned w = workers ? workers : default_workers();
    if (test->parsed())
      return cmd_test(csv_path, p, trend_kind, r, rule_name, alpha, test_tbl, w);
    if (repl->parsed())
      return cmd_replicate(config_path,
                           repl_seed_opt->count() ? &repl_seed : nullptr);
    if (hist->parsed())
      return cmd_histogram(hist_tbl, bins,
                           hist_workers ? hist_workers : default_workers());
    if (build->parsed())
      return cmd_table_build(tbl, tbl_workers ? tbl_workers : default_workers());
    if (list->parsed()) return cmd_table_list();
    if (show->parsed()) return cmd_table_show(tbl);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
