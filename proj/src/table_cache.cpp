#include "trendstat/table_cache.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace trendstat {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string serialize_table(const QuantileTable& table) {
  std::ostringstream out;
  out << "functional=" << to_string(table.id.hypothesis) << '\n'
      << "kappa_zero=" << (table.id.kappa_zero ? "true" : "false") << '\n'
      << "r=" << table.id.r << '\n'
      << "d=" << table.id.d << '\n'
      << "grid_T=" << table.grid_T << '\n'
      << "n_rep=" << table.n_rep << '\n'
      << "seed=" << table.seed << '\n'
      << "mean=" << fmt17(table.mean) << '\n';
  for (const auto& [prob, value] : table.quantiles)
    out << "q " << fmt17(prob) << ' ' << fmt17(value) << '\n';
  std::string body = out.str();
  char hex[24];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(fnv1a64(body)));
  body += "checksum ";
  body += hex;
  body += '\n';
  return body;
}

QuantileTable parse_table(const std::string& bytes) {
  const auto tail = bytes.rfind("checksum ");
  if (tail == std::string::npos)
    throw std::runtime_error("table record: missing checksum line");
  const std::string body = bytes.substr(0, tail);
  std::istringstream check(bytes.substr(tail));
  std::string word, hex;
  check >> word >> hex;
  if (std::stoull(hex, nullptr, 16) != fnv1a64(body))
    throw std::runtime_error(
        "table record: checksum mismatch (corrupt cache; rebuild with "
        "'trendstat table build')");

  QuantileTable table;
  std::istringstream in(body);
  std::string line;
  auto value_of = [](const std::string& l) {
    const auto pos = l.find('=');
    if (pos == std::string::npos)
      throw std::runtime_error("table record: malformed header line");
    return l.substr(pos + 1);
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("q ", 0) == 0) {
      std::istringstream qs(line.substr(2));
      double prob, value;
      if (!(qs >> prob >> value))
        throw std::runtime_error("table record: malformed quantile line");
      table.quantiles.emplace_back(prob, value);
    } else if (line.rfind("functional=", 0) == 0) {
      table.id.hypothesis = hypothesis_from_string(value_of(line));
    } else if (line.rfind("kappa_zero=", 0) == 0) {
      table.id.kappa_zero = value_of(line) == "true";
    } else if (line.rfind("r=", 0) == 0) {
      table.id.r = std::stoi(value_of(line));
    } else if (line.rfind("d=", 0) == 0) {
      table.id.d = std::stoi(value_of(line));
    } else if (line.rfind("grid_T=", 0) == 0) {
      table.grid_T = std::stol(value_of(line));
    } else if (line.rfind("n_rep=", 0) == 0) {
      table.n_rep = std::stol(value_of(line));
    } else if (line.rfind("seed=", 0) == 0) {
      table.seed = std::stoull(value_of(line));
    } else if (line.rfind("mean=", 0) == 0) {
      table.mean = std::stod(value_of(line));
    } else {
      throw std::runtime_error("table record: unexpected line '" + line + "'");
    }
  }
  if (table.quantiles.empty())
    throw std::runtime_error("table record: no quantile lines");
  return table;
}

std::filesystem::path TableCache::default_dir() {
  if (const char* dir = std::getenv("TRENDSTAT_CACHE_DIR"); dir && *dir)
    return dir;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg)
    return std::filesystem::path(xdg) / "trendstat";
  if (const char* home = std::getenv("HOME"); home && *home)
    return std::filesystem::path(home) / ".cache" / "trendstat";
  return std::filesystem::path("trendstat_cache");
}

TableCache::TableCache() : dir_(default_dir()) {}
TableCache::TableCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path TableCache::file_for(const FunctionalId& id,
                                           Eigen::Index grid_T, long n_rep,
                                           std::uint64_t seed) const {
  std::string name = id.key();
  name += "_g" + std::to_string(grid_T);
  name += "_n" + std::to_string(n_rep);
  name += "_s" + std::to_string(seed);
  name += ".qt";
  return dir_ / name;
}

std::optional<QuantileTable> TableCache::load(const FunctionalId& id,
                                              Eigen::Index grid_T, long n_rep,
                                              std::uint64_t seed) const {
  const auto path = file_for(id, grid_T, n_rep, seed);
  if (!std::filesystem::exists(path)) return std::nullopt;
  QuantileTable table = parse_table(read_file(path));
  table.created_at = "cached";
  return table;
}

void TableCache::store(const QuantileTable& table) const {
  std::filesystem::create_directories(dir_);
  const auto path = file_for(table.id, table.grid_T, table.n_rep, table.seed);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << serialize_table(table);
}

std::vector<std::filesystem::path> TableCache::list() const {
  std::vector<std::filesystem::path> out;
  if (!std::filesystem::exists(dir_)) return out;
  for (const auto& entry : std::filesystem::directory_iterator(dir_))
    if (entry.is_regular_file() && entry.path().extension() == ".qt")
      out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

QuantileTable ensure_table(const TableCache& cache, const FunctionalId& id,
                           Eigen::Index grid_T, long n_rep, std::uint64_t seed,
                           unsigned workers, bool* was_cached) {
  if (auto cached = cache.load(id, grid_T, n_rep, seed)) {
    if (was_cached) *was_cached = true;
    return *cached;
  }
  QuantileTable table = build_table(id, grid_T, n_rep, seed,
                                    default_probability_grid(), workers);
  cache.store(table);
  if (was_cached) *was_cached = false;
  return table;
}

}  // namespace trendstat
