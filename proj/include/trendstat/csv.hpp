#pragma once

#include <filesystem>
#include <iosfwd>

#include "trendstat/simulate.hpp"

namespace trendstat {

// Reads a one-value-per-row series. A single leading header row is skipped;
// a second column, when present, is ignored with a warning on `warnings`.
// Non-numeric cells are reported with their row number; fewer than 20 usable
// rows is refused as "series too short".
TimeSeries ingest_csv(const std::filesystem::path& path,
                      std::ostream* warnings = nullptr);

void write_csv(const std::filesystem::path& path, const TimeSeries& series);

}  // namespace trendstat
