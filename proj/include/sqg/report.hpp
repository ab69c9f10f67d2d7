#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace sqg {

enum class CheckStatus { Pass, Fail, Info };

const char* to_string(CheckStatus s) noexcept;

/// Outcome of one diagnostic check. Serializes to a single record line:
///   check=<name> status=<pass|fail|info> <fitted>=<v> tolerance=<v> range=[a,b] key=value ...
struct CheckReport {
  std::string name;
  CheckStatus status = CheckStatus::Info;
  std::string fitted_name;
  double fitted = std::numeric_limits<double>::quiet_NaN();
  double tolerance = std::numeric_limits<double>::quiet_NaN();
  double t_min = std::numeric_limits<double>::quiet_NaN();
  double t_max = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::pair<std::string, double>> values;
  std::string note;

  bool passed() const noexcept { return status != CheckStatus::Fail; }
  double value(const std::string& key) const;
  std::string to_record() const;
};

/// Sorts by check name so parallel check runs merge deterministically.
void sort_reports(std::vector<CheckReport>& reports);

/// %.17g formatting used for every number written to disk.
std::string format_double(double v);

}  // namespace sqg
