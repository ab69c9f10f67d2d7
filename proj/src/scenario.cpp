#include "sqg/scenario.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sqg/checkpoint.hpp"
#include "sqg/error.hpp"
#include "sqg/norms.hpp"

namespace sqg {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"scenario", {"name", "n", "kappa", "T"}},
      {"time", {"scheme", "policy", "dt", "safety", "dt_max", "dealias"}},
      {"forcing", {"type", "modes"}},
      {"initial", {"type", "modes", "seed", "kmax", "slope", "amplitude", "norm", "path", "scale"}},
      {"output", {"sample_interval", "snapshot_stride", "dense_until", "save_snapshots", "directory"}},
      {"checks",
       {"list", "energy_tolerance", "conservation_tolerance", "degiorgi_t0", "degiorgi_M", "degiorgi_k_max", "alpha",
        "xi0", "c3", "threads"}},
      {"continuity", {"mode", "epsilon", "T"}},
  };
  return s;
}

class Reader {
 public:
  explicit Reader(std::map<std::string, Section> data) : data_(std::move(data)) {}

  bool has(const std::string& sec, const std::string& key) const {
    auto it = data_.find(sec);
    return it != data_.end() && it->second.count(key);
  }
  bool has_section(const std::string& sec) const { return data_.count(sec) > 0; }

  std::string text(const std::string& sec, const std::string& key, const std::string& fallback) const {
    return has(sec, key) ? data_.at(sec).at(key).value : fallback;
  }

  double number(const std::string& sec, const std::string& key, double fallback) const {
    if (!has(sec, key)) return fallback;
    return parse_number(sec, key, data_.at(sec).at(key).value);
  }

  long long integer(const std::string& sec, const std::string& key, long long fallback) const {
    if (!has(sec, key)) return fallback;
    const std::string& v = data_.at(sec).at(key).value;
    long long out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) fail(sec, key, "expected an integer, got '" + v + "'");
    return out;
  }

  bool flag(const std::string& sec, const std::string& key, bool fallback) const {
    if (!has(sec, key)) return fallback;
    const std::string& v = data_.at(sec).at(key).value;
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail(sec, key, "expected true or false, got '" + v + "'");
  }

  std::vector<FourierMode> modes(const std::string& sec, const std::string& key) const {
    std::vector<FourierMode> out;
    for (const auto& item : split(text(sec, key, ""), ';')) {
      const auto parts = split_ws(item);
      if (parts.size() != 4) fail(sec, key, "each mode needs 'k1 k2 cos_amp sin_amp', got '" + item + "'");
      FourierMode m;
      m.k1 = static_cast<int>(parse_number(sec, key, parts[0]));
      m.k2 = static_cast<int>(parse_number(sec, key, parts[1]));
      if (m.k1 != parse_number(sec, key, parts[0]) || m.k2 != parse_number(sec, key, parts[1]))
        fail(sec, key, "wavenumbers must be integers");
      m.cos_amp = parse_number(sec, key, parts[2]);
      m.sin_amp = parse_number(sec, key, parts[3]);
      out.push_back(m);
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& sec, const std::string& key, const std::string& msg) const {
    std::string where = sec + "." + key;
    if (has(sec, key)) where += " (line " + std::to_string(data_.at(sec).at(key).line) + ")";
    throw ConfigError(where + ": " + msg);
  }

 private:
  static std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
  }

  double parse_number(const std::string& sec, const std::string& key, const std::string& v) const {
    double out = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
      fail(sec, key, "expected a number, got '" + v + "'");
    return out;
  }

  std::map<std::string, Section> data_;
};

std::map<std::string, Section> tokenize(const std::string& text) {
  std::map<std::string, Section> out;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    if (const auto c = s.find('#'); c != std::string::npos) s.erase(c);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("line " + std::to_string(line) + ": malformed section header '" + s + "'");
      section = trim(std::string_view(s).substr(1, s.size() - 2));
      if (!schema().count(section)) throw ConfigError("line " + std::to_string(line) + ": unknown section '" + section + "'");
      if (out.count(section)) throw ConfigError("line " + std::to_string(line) + ": duplicate section '" + section + "'");
      out[section];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
    if (section.empty()) throw ConfigError("line " + std::to_string(line) + ": key outside of a section");
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string value = trim(std::string_view(s).substr(eq + 1));
    if (!schema().at(section).count(key))
      throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "' in section [" + section + "]");
    if (out[section].count(key)) throw ConfigError("line " + std::to_string(line) + ": duplicate key '" + key + "'");
    out[section][key] = {value, line};
  }
  return out;
}

bool power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string ScenarioSpec::hash() const { return sha256_hex(source); }

SolverConfig ScenarioSpec::solver_config() const {
  const TorusGrid g(n);
  SolverConfig c = SolverConfig::make(kappa, g);
  c.forcing = field_from_modes(g, forcing.modes);
  c.dt = dt;
  c.scheme = scheme;
  c.dealias = dealias;
  c.validate();
  return c;
}

SpectralField ScenarioSpec::initial_field() const {
  const TorusGrid g(n);
  SpectralField f(g);
  switch (initial.kind) {
    case InitialSpec::Kind::Modes: f = field_from_modes(g, initial.modes); break;
    case InitialSpec::Kind::Random: {
      f = random_band_limited(g, initial.seed, initial.kmax, initial.slope);
      const double current = initial.norm == "l2" ? hs_norm(f, 0.0) : linf_norm(f, 8);
      if (current > 0.0) f *= initial.amplitude / current;
      break;
    }
    case InitialSpec::Kind::Checkpoint: {
      const Checkpoint ck = read_checkpoint(initial.checkpoint);
      f = regrid(ck.state.theta, g);
      break;
    }
  }
  return initial.scale * f;
}

ScenarioSpec parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
  const Reader r(tokenize(text));
  ScenarioSpec s;
  s.source = text;
  s.base_dir = base_dir;

  s.name = r.text("scenario", "name", "scenario");
  if (s.name.empty() || s.name.find_first_of("/\\ ") != std::string::npos)
    r.fail("scenario", "name", "must be non-empty without spaces or slashes");
  const long long n = r.integer("scenario", "n", 64);
  if (n < 8 || !power_of_two(n) || n > 4096) r.fail("scenario", "n", "must be a power of two in [8, 4096]");
  s.n = static_cast<int>(n);
  s.kappa = r.number("scenario", "kappa", 1.0);
  if (!(s.kappa >= 0.0 && s.kappa <= 1.0)) r.fail("scenario", "kappa", "must lie in [0, 1]");
  s.T = r.number("scenario", "T", 1.0);
  if (!(s.T > 0.0)) r.fail("scenario", "T", "must be positive");

  const std::string scheme = r.text("time", "scheme", "ifrk2");
  if (scheme == "ifrk2") s.scheme = TimeScheme::IntegratingFactorRK2;
  else if (scheme == "imex1") s.scheme = TimeScheme::Imex1;
  else r.fail("time", "scheme", "must be ifrk2 or imex1");
  const std::string policy = r.text("time", "policy", "fixed");
  if (policy == "fixed") s.dt.kind = DtPolicy::Kind::Fixed;
  else if (policy == "cfl") s.dt.kind = DtPolicy::Kind::Cfl;
  else r.fail("time", "policy", "must be fixed or cfl");
  s.dt.dt = r.number("time", "dt", 1e-3);
  if (!(s.dt.dt > 0.0)) r.fail("time", "dt", "must be positive");
  s.dt.safety = r.number("time", "safety", 0.5);
  if (!(s.dt.safety > 0.0 && s.dt.safety < 1.0)) r.fail("time", "safety", "must lie in (0, 1)");
  s.dt.dt_max = r.number("time", "dt_max", 1e-2);
  if (!(s.dt.dt_max > 0.0)) r.fail("time", "dt_max", "must be positive");
  s.dealias = r.flag("time", "dealias", true);

  const std::string ftype = r.text("forcing", "type", "zero");
  if (ftype == "modes") {
    s.forcing.modes = r.modes("forcing", "modes");
    if (s.forcing.modes.empty()) r.fail("forcing", "modes", "at least one mode is required");
  } else if (ftype != "zero") {
    r.fail("forcing", "type", "must be zero or modes");
  } else if (r.has("forcing", "modes")) {
    r.fail("forcing", "modes", "not allowed with type = zero");
  }
  for (const auto& m : s.forcing.modes)
    if (std::abs(m.k1) > s.n / 3 || std::abs(m.k2) > s.n / 3 || (m.k1 == 0 && m.k2 == 0))
      r.fail("forcing", "modes", "wavenumbers must be nonzero and inside the dealiased band");

  if (!r.has("initial", "type")) throw ConfigError("initial.type: an initial condition is required");
  const std::string itype = r.text("initial", "type", "");
  s.initial.scale = r.number("initial", "scale", 1.0);
  if (itype == "modes") {
    s.initial.kind = InitialSpec::Kind::Modes;
    s.initial.modes = r.modes("initial", "modes");
    for (const auto& m : s.initial.modes)
      if (std::abs(m.k1) >= s.n / 2 || std::abs(m.k2) >= s.n / 2)
        r.fail("initial", "modes", "wavenumber outside the grid");
  } else if (itype == "random") {
    s.initial.kind = InitialSpec::Kind::Random;
    if (!r.has("initial", "seed")) throw ConfigError("initial.seed: random initial data needs a seed");
    const long long seed = r.integer("initial", "seed", 0);
    if (seed < 0) r.fail("initial", "seed", "must be >= 0");
    s.initial.seed = static_cast<std::uint64_t>(seed);
    s.initial.kmax = r.number("initial", "kmax", 4.0);
    if (!(s.initial.kmax >= 1.0 && s.initial.kmax < s.n / 2)) r.fail("initial", "kmax", "must lie in [1, n/2)");
    s.initial.slope = r.number("initial", "slope", 1.0);
    s.initial.amplitude = r.number("initial", "amplitude", 1.0);
    if (!(s.initial.amplitude >= 0.0)) r.fail("initial", "amplitude", "must be >= 0");
    s.initial.norm = r.text("initial", "norm", "linf");
    if (s.initial.norm != "linf" && s.initial.norm != "l2") r.fail("initial", "norm", "must be linf or l2");
  } else if (itype == "checkpoint") {
    s.initial.kind = InitialSpec::Kind::Checkpoint;
    if (!r.has("initial", "path")) throw ConfigError("initial.path: checkpoint initial data needs a path");
    std::filesystem::path p = r.text("initial", "path", "");
    if (p.is_relative()) p = base_dir / p;
    if (!std::filesystem::exists(p)) r.fail("initial", "path", "checkpoint '" + p.string() + "' does not exist");
    s.initial.checkpoint = p;
  } else {
    r.fail("initial", "type", "must be modes, random or checkpoint");
  }

  s.sample_interval = r.number("output", "sample_interval", 0.01);
  if (!(s.sample_interval > 0.0)) r.fail("output", "sample_interval", "must be positive");
  const long long stride = r.integer("output", "snapshot_stride", 10);
  if (stride < 1) r.fail("output", "snapshot_stride", "must be >= 1");
  s.snapshot_stride = static_cast<int>(stride);
  s.dense_until = r.number("output", "dense_until", 0.0);
  if (!(s.dense_until >= 0.0)) r.fail("output", "dense_until", "must be >= 0");
  s.save_snapshots = r.flag("output", "save_snapshots", true);
  s.directory = r.text("output", "directory", s.name);

  s.checks = split(r.text("checks", "list", ""), ',');
  for (const auto& c : s.checks) {
    const auto& known = known_checks();
    if (c != "continuity" && std::find(known.begin(), known.end(), c) == known.end())
      r.fail("checks", "list", "unknown check '" + c + "'");
  }
  if (s.kappa == 0.0)
    for (const auto& c : s.checks)
      if (c != "conservation")
        r.fail("checks", "list", "kappa = 0 allows only the conservation check, got '" + c + "'");
  auto& co = s.check_options;
  co.energy_tolerance = r.number("checks", "energy_tolerance", co.energy_tolerance);
  co.conservation_tolerance = r.number("checks", "conservation_tolerance", co.conservation_tolerance);
  co.degiorgi_t0 = r.number("checks", "degiorgi_t0", co.degiorgi_t0);
  if (!(co.degiorgi_t0 > 0.0 && co.degiorgi_t0 <= 1.0)) r.fail("checks", "degiorgi_t0", "must lie in (0, 1]");
  if (r.text("checks", "degiorgi_M", "auto") != "auto") {
    co.degiorgi_M = r.number("checks", "degiorgi_M", 0.0);
    if (!(co.degiorgi_M > 0.0)) r.fail("checks", "degiorgi_M", "must be auto or positive");
  }
  co.degiorgi_k_max = static_cast<int>(r.integer("checks", "degiorgi_k_max", co.degiorgi_k_max));
  if (co.degiorgi_k_max < 1 || co.degiorgi_k_max > 60) r.fail("checks", "degiorgi_k_max", "must lie in [1, 60]");
  if (r.text("checks", "alpha", "auto") != "auto") {
    co.alpha = r.number("checks", "alpha", 0.0);
    if (!(co.alpha > 0.0 && co.alpha <= 0.25)) r.fail("checks", "alpha", "must be auto or lie in (0, 1/4]");
  }
  co.xi0 = r.number("checks", "xi0", co.xi0);
  if (!(co.xi0 >= 0.0)) r.fail("checks", "xi0", "must be >= 0");
  co.c3 = r.number("checks", "c3", co.c3);
  if (!(co.c3 >= 64.0)) r.fail("checks", "c3", "must be >= 64");
  co.threads = static_cast<int>(r.integer("checks", "threads", 1));
  if (co.threads < 1) r.fail("checks", "threads", "must be >= 1");

  const bool wants_continuity = std::find(s.checks.begin(), s.checks.end(), "continuity") != s.checks.end();
  if (r.has_section("continuity") || wants_continuity) {
    ContinuitySpec c;
    const auto parts = split(r.text("continuity", "mode", "5 3"), ' ');
    if (parts.size() != 2) r.fail("continuity", "mode", "expected 'k1 k2'");
    try {
      c.k1 = std::stoi(parts[0]);
      c.k2 = std::stoi(parts[1]);
    } catch (const std::exception&) {
      r.fail("continuity", "mode", "expected integer wavenumbers");
    }
    if ((c.k1 == 0 && c.k2 == 0) || std::abs(c.k1) > s.n / 3 || std::abs(c.k2) > s.n / 3)
      r.fail("continuity", "mode", "must be a nonzero mode inside the dealiased band");
    c.epsilon = r.number("continuity", "epsilon", c.epsilon);
    if (!(c.epsilon > 0.0)) r.fail("continuity", "epsilon", "must be positive");
    c.T = r.number("continuity", "T", c.T);
    if (!(c.T > 0.0)) r.fail("continuity", "T", "must be positive");
    s.continuity = c;
  }
  return s;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read scenario file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

}  // namespace sqg
