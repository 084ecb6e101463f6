#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "trendstat/limit_laws.hpp"

namespace trendstat {

// FNV-1a over a byte string; guards cache records against truncation and
// hand edits, not against adversaries.
std::uint64_t fnv1a64(const std::string& bytes);

// Self-describing text record:
//   functional=<id>  kappa_zero=<bool>  r=<int>  d=<int>  grid_T=<int>
//   n_rep=<int>  seed=<u64>  mean=<float>   (one per line)
//   q <prob> <value>                        (one per quantile)
//   checksum <hex>                          (over all prior bytes)
// Floats carry 17 significant digits, so a parse-serialize round trip is
// byte-identical.
std::string serialize_table(const QuantileTable& table);

// Throws on malformed records; a checksum mismatch reports that the cache
// file must be rebuilt.
QuantileTable parse_table(const std::string& bytes);

// On-disk table store. Directory resolution order: TRENDSTAT_CACHE_DIR,
// XDG_CACHE_HOME/trendstat, HOME/.cache/trendstat, ./trendstat_cache.
class TableCache {
 public:
  TableCache();  // resolved default directory
  explicit TableCache(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }

  std::filesystem::path file_for(const FunctionalId& id, Eigen::Index grid_T,
                                 long n_rep, std::uint64_t seed) const;

  // nullopt when absent; throws when present but corrupt.
  std::optional<QuantileTable> load(const FunctionalId& id, Eigen::Index grid_T,
                                    long n_rep, std::uint64_t seed) const;

  void store(const QuantileTable& table) const;

  std::vector<std::filesystem::path> list() const;

  static std::filesystem::path default_dir();

 private:
  std::filesystem::path dir_;
};

// Cache-aware build: returns the stored table when the exact key exists,
// otherwise builds, persists, and returns it. `was_cached` reports which.
QuantileTable ensure_table(const TableCache& cache, const FunctionalId& id,
                           Eigen::Index grid_T, long n_rep, std::uint64_t seed,
                           unsigned workers, bool* was_cached = nullptr);

}  // namespace trendstat
