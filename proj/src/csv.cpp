#include "trendstat/csv.hpp"

#include <fstream>
#include <ostream>
#include <vector>

namespace trendstat {

namespace {

std::string strip(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

bool parse_value(const std::string& cell, double& out) {
  const std::string t = strip(cell);
  if (t.empty()) return false;
  std::size_t used = 0;
  try {
    out = std::stod(t, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == t.size();
}

}  // namespace

TimeSeries ingest_csv(const std::filesystem::path& path,
                      std::ostream* warnings) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  std::vector<double> values;
  std::string line;
  long row = 0;
  bool warned_extra = false;
  while (std::getline(in, line)) {
    ++row;
    const std::string cells = strip(line);
    if (cells.empty()) continue;
    const auto comma = cells.find(',');
    const std::string first =
        comma == std::string::npos ? cells : cells.substr(0, comma);
    if (comma != std::string::npos && !warned_extra && warnings) {
      *warnings << "warning: " << path.string()
                << ": extra columns ignored (first seen at row " << row << ")\n";
      warned_extra = true;
    }
    double v = 0.0;
    if (!parse_value(first, v)) {
      // A non-numeric first row is a header; anywhere else it is an error.
      if (row == 1 && values.empty()) continue;
      throw std::runtime_error(path.string() + ": non-numeric value at row " +
                               std::to_string(row));
    }
    values.push_back(v);
  }
  if (values.size() < 20) throw std::runtime_error("series too short");

  TimeSeries series;
  series.values = Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                    static_cast<Eigen::Index>(values.size()));
  series.source = path.string();
  return series;
}

void write_csv(const std::filesystem::path& path, const TimeSeries& series) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "value\n";
  out.precision(17);
  for (Eigen::Index t = 0; t < series.size(); ++t)
    out << series.values[t] << '\n';
}

}  // namespace trendstat
