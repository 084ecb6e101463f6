#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include <json.hpp>
#include <trendstat/csv.hpp>
#include <trendstat/simulate.hpp>

using namespace trendstat;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "trendstat_cli_test";

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  const fs::path out = kWork / "stdout.txt";
  const fs::path err = kWork / "stderr.txt";
  const std::string cmd = std::string(TRENDSTAT_CLI_PATH) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

void write_fixture(const fs::path& path, int d, int rho, std::uint64_t rep) {
  DgpConfig cfg;
  cfg.sample_size = 300;
  cfg.d = d;
  cfg.rho = rho;
  cfg.eps_noise.seed = 20250101;
  cfg.eta_noise.seed = 20250102;
  write_csv(path, simulate_dgp(cfg.with_replication(rep)));
}

struct Setup {
  Setup() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
    setenv("TRENDSTAT_CACHE_DIR", (kWork / "cache").string().c_str(), 1);
  }
};
const Setup setup_once;

}  // namespace

TEST_CASE("ingest_csv: plain rows, header, and error reporting") {
  const fs::path dir = kWork / "ingest";
  fs::create_directories(dir);

  {
    std::ofstream f(dir / "plain.csv");
    for (int i = 1; i <= 25; ++i) f << i << ".0\n";
  }
  const TimeSeries plain = ingest_csv(dir / "plain.csv");
  CHECK(plain.size() == 25);
  CHECK(plain.values[2] == 3.0);

  {
    std::ofstream f(dir / "header.csv");
    f << "value\n";
    for (int i = 0; i < 25; ++i) f << 0.5 * i << "\n";
  }
  CHECK(ingest_csv(dir / "header.csv").size() == 25);

  {
    std::ofstream f(dir / "second_col.csv");
    f << "value,date\n";
    for (int i = 0; i < 25; ++i) f << i << "," << 2000 + i << "\n";
  }
  std::ostringstream warnings;
  const TimeSeries two = ingest_csv(dir / "second_col.csv", &warnings);
  CHECK(two.size() == 25);
  CHECK(warnings.str().find("extra columns ignored") != std::string::npos);

  {
    std::ofstream f(dir / "bad.csv");
    for (int i = 1; i <= 30; ++i) {
      if (i == 7) f << "abc\n";
      else f << i << "\n";
    }
  }
  CHECK_THROWS_WITH_AS(static_cast<void>(ingest_csv(dir / "bad.csv")),
                       doctest::Contains("row 7"), std::runtime_error);

  {
    std::ofstream f(dir / "short.csv");
    for (int i = 0; i < 19; ++i) f << i << "\n";
  }
  CHECK_THROWS_WITH_AS(static_cast<void>(ingest_csv(dir / "short.csv")),
                       "series too short", std::runtime_error);
}

TEST_CASE("cli test: exit codes reflect the decision") {
  // Seeds are frozen; each fixture was chosen so its statistic falls deep in
  // the relevant region at T = 300.
  write_fixture(kWork / "h0.csv", 0, 1, 0);
  write_fixture(kWork / "h1p.csv", 1, 1, 0);
  write_fixture(kWork / "h1m.csv", 1, -1, 0);

  const RunResult accept =
      run_cli("test " + (kWork / "h0.csv").string() + " --rule classic");
  CHECK(accept.exit_code == 0);
  const json aj = json::parse(accept.out);
  CHECK(aj["schema_version"] == 1);
  CHECK(aj["decision"]["reject"] == false);
  CHECK(aj["table"]["functional"] == "H0");

  const RunResult plus =
      run_cli("test " + (kWork / "h1p.csv").string() + " --rule classic");
  CHECK(plus.exit_code == 2);
  CHECK(json::parse(plus.out)["decision"]["direction"] == "H1_plus_side");

  const RunResult minus =
      run_cli("test " + (kWork / "h1m.csv").string() + " --rule corrected");
  CHECK(minus.exit_code == 2);
  const json mj = json::parse(minus.out);
  CHECK(mj["decision"]["direction"] == "H1_minus_side");
  CHECK(mj["decision"]["p_value_interpolated"] == true);

  // The classic rule is blind to the same fixture.
  const RunResult blind =
      run_cli("test " + (kWork / "h1m.csv").string() + " --rule classic");
  CHECK(blind.exit_code == 0);

  const RunResult broken = run_cli("test " + (kWork / "missing.csv").string());
  CHECK(broken.exit_code == 1);
  CHECK(broken.err.find("error:") != std::string::npos);

  const RunResult too_high = run_cli("test " + (kWork / "h0.csv").string() +
                                     " --trend poly --r 9");
  CHECK(too_high.exit_code == 1);
  CHECK(too_high.err.find("supported maximum") != std::string::npos);
}

TEST_CASE("cli test: AR order flows through the report") {
  DgpConfig cfg;
  cfg.sample_size = 400;
  cfg.p = 1;
  cfg.theta = Eigen::VectorXd::Constant(1, 0.5);
  cfg.eps_noise.seed = 33;
  write_csv(kWork / "ar1.csv", simulate_dgp(cfg));

  const RunResult r =
      run_cli("test " + (kWork / "ar1.csv").string() + " --p 1 --rule classic");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j["fit"]["theta"].size() == 1);
  CHECK(std::abs(j["fit"]["theta"][0].get<double>() - 0.5) < 0.25);
  CHECK(j["fit"].contains("converged"));
}

TEST_CASE("cli replicate: determinism across runs and worker counts") {
  auto config_with = [&](int workers, const fs::path& out) {
    const fs::path cfg = kWork / ("rep_w" + std::to_string(workers) + ".cfg");
    std::ofstream f(cfg);
    f << "T=300\np=0\ntrend=none\nsigma_eta=1\nn_rep=400\n"
      << "procedures=lmc,corrected\nalpha=0.05\nseed=7\n"
      << "table_grid_T=1000\ntable_n_rep=20000\ntable_seed=3\n"
      << "workers=" << workers << "\noutput=" << out.string() << "\n";
    return cfg;
  };

  const fs::path out1 = kWork / "rep1.json";
  const fs::path out1b = kWork / "rep1b.json";
  const fs::path out2 = kWork / "rep2.json";
  REQUIRE(run_cli("replicate --config " + config_with(1, out1).string()).exit_code == 0);
  REQUIRE(run_cli("replicate --config " + config_with(1, out1b).string()).exit_code == 0);
  REQUIRE(run_cli("replicate --config " + config_with(2, out2).string()).exit_code == 0);

  // Same worker count: identical bytes. Different worker count: identical
  // rejection counts (replication-indexed substreams).
  CHECK(slurp(out1) == slurp(out1b));
  CHECK(json::parse(slurp(out1))["cells"] == json::parse(slurp(out2))["cells"]);

  const json j = json::parse(slurp(out1));
  double h0_lmc = -1.0, h1m_corr = -1.0, h1m_lmc = -1.0;
  for (const auto& cell : j["cells"]) {
    if (cell["scenario"] == "H0" && cell["procedure"] == "lmc")
      h0_lmc = cell["rate"].get<double>();
    if (cell["scenario"] == "H1_minus" && cell["procedure"] == "corrected")
      h1m_corr = cell["rate"].get<double>();
    if (cell["scenario"] == "H1_minus" && cell["procedure"] == "lmc")
      h1m_lmc = cell["rate"].get<double>();
  }
  // Desk-scale sanity at n_rep = 400 (acceptance pins the tight bands).
  CHECK(h0_lmc > 0.02);
  CHECK(h0_lmc < 0.09);
  CHECK(h1m_lmc < 0.02);
  CHECK(h1m_corr > 0.85);

  // --seed overrides the config file's master seed.
  const fs::path out3 = kWork / "rep3.json";
  REQUIRE(run_cli("replicate --seed 8 --config " +
                  config_with(1, out3).string()).exit_code == 0);
  CHECK(json::parse(slurp(out3))["seed"] == 8);
  CHECK(json::parse(slurp(out3))["cells"] != json::parse(slurp(out1))["cells"]);
}

TEST_CASE("cli hist: normalized frequencies") {
  const RunResult one = run_cli("hist --null kappa0 --bins 1 --grid-T 300 --n-rep 500 --seed 5");
  REQUIRE(one.exit_code == 0);
  std::istringstream lines(one.out);
  std::string header, row;
  std::getline(lines, header);
  CHECK(header == "bin_left,bin_right,frequency");
  std::getline(lines, row);
  CHECK(row.substr(row.rfind(',') + 1) == "1");

  const RunResult many =
      run_cli("hist --null kappa0 --bins 40 --grid-T 400 --n-rep 4000 --seed 5");
  REQUIRE(many.exit_code == 0);
  std::istringstream in(many.out);
  std::getline(in, header);
  double total = 0.0, first_bins = 0.0;
  int row_count = 0;
  std::string line;
  while (std::getline(in, line)) {
    const auto c2 = line.rfind(',');
    const double freq = std::stod(line.substr(c2 + 1));
    total += freq;
    if (row_count < 14) first_bins += freq;  // left third of the support
    ++row_count;
  }
  CHECK(row_count == 40);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(first_bins > 0.85);  // strong right skew of the null functional
}

TEST_CASE("cli hist: higher trend order shifts mass toward zero") {
  auto approx_mean = [&](const std::string& flags) {
    const RunResult r = run_cli("hist " + flags +
                                " --bins 80 --grid-T 500 --n-rep 20000 --seed 9");
    REQUIRE(r.exit_code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    double mean = 0.0;
    while (std::getline(in, line)) {
      const auto c1 = line.find(',');
      const auto c2 = line.rfind(',');
      const double left = std::stod(line.substr(0, c1));
      const double right = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
      mean += 0.5 * (left + right) * std::stod(line.substr(c2 + 1));
    }
    return mean;
  };
  CHECK(approx_mean("--null poly --r 4") < approx_mean("--null poly --r 0"));
}

TEST_CASE("cli table: build, cache hit, show, corruption") {
  const std::string flags =
      "--null poly --r 2 --grid-T 300 --n-rep 2000 --seed 8";
  const RunResult first = run_cli("table build " + flags);
  REQUIRE(first.exit_code == 0);
  CHECK(first.out.find("built:") != std::string::npos);

  const RunResult second = run_cli("table build " + flags);
  REQUIRE(second.exit_code == 0);
  CHECK(second.out.find("cache hit:") != std::string::npos);

  const RunResult shown = run_cli("table show " + flags);
  REQUIRE(shown.exit_code == 0);
  CHECK(shown.out.find("functional=H0") != std::string::npos);
  CHECK(shown.out.find("checksum") != std::string::npos);

  const RunResult listed = run_cli("table list");
  REQUIRE(listed.exit_code == 0);
  CHECK(listed.out.find("H0_poly2") != std::string::npos);

  const RunResult missing =
      run_cli("table show --null poly --r 7 --grid-T 300 --n-rep 2000 --seed 8");
  CHECK(missing.exit_code == 1);
  CHECK(missing.err.find("table not built") != std::string::npos);

  // Flip one byte in the cached record: the checksum must refuse it.
  const fs::path cache_dir = kWork / "cache";
  fs::path victim;
  for (const auto& entry : fs::directory_iterator(cache_dir))
    if (entry.path().filename().string().rfind("H0_poly2", 0) == 0)
      victim = entry.path();
  REQUIRE_FALSE(victim.empty());
  std::string bytes = slurp(victim);
  bytes[bytes.find("mean=") + 5] ^= 1;
  std::ofstream(victim, std::ios::binary | std::ios::trunc) << bytes;
  const RunResult corrupt = run_cli("table show " + flags);
  CHECK(corrupt.exit_code == 1);
  CHECK(corrupt.err.find("checksum mismatch") != std::string::npos);
}
