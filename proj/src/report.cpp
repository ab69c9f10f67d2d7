#include "sqg/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sqg/error.hpp"

namespace sqg {

const char* to_string(CheckStatus s) noexcept {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Info: return "info";
  }
  return "info";
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double CheckReport::value(const std::string& key) const {
  for (const auto& [k, v] : values)
    if (k == key) return v;
  throw InputError("report '" + name + "' has no value '" + key + "'");
}

std::string CheckReport::to_record() const {
  std::string out = "check=" + name + " status=" + to_string(status);
  if (!fitted_name.empty()) out += " " + fitted_name + "=" + format_double(fitted);
  out += " tolerance=" + format_double(tolerance);
  out += " range=[" + format_double(t_min) + "," + format_double(t_max) + "]";
  for (const auto& [k, v] : values) out += " " + k + "=" + format_double(v);
  if (!note.empty()) out += " note=\"" + note + "\"";
  return out;
}

void sort_reports(std::vector<CheckReport>& reports) {
  std::stable_sort(reports.begin(), reports.end(),
                   [](const CheckReport& a, const CheckReport& b) { return a.name < b.name; });
}

}  // namespace sqg
