#include "phaseflow/config_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace phaseflow {

namespace {

std::string trim(const std::string& s) {
  const auto from = s.find_first_not_of(" \t\r");
  if (from == std::string::npos) return {};
  const auto to = s.find_last_not_of(" \t\r");
  return s.substr(from, to - from + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void fail(int line, const std::string& what) {
  std::ostringstream msg;
  msg << "config line " << line << ": " << what;
  throw ConfigError(msg.str());
}

template <typename T>
T parse_number(const std::string& text, int line, const std::string& key) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last)
    fail(line, "value '" + text + "' for key '" + key + "' is not a valid " +
                   (std::is_integral_v<T> ? "integer" : "number"));
  return value;
}

struct Key {
  const char* name;
  std::function<void(ExperimentConfig&, const std::string&, int)> set;
  std::function<void(const ExperimentConfig&, std::string&)> emit;
};

std::string emit_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> t;
    auto add_real = [&t](const char* name, double ExperimentConfig::* m) {
      t.push_back({name,
                   [name, m](ExperimentConfig& c, const std::string& v,
                             int line) {
                     c.*m = parse_number<double>(v, line, name);
                   },
                   [m](const ExperimentConfig& c, std::string& out) {
                     out = emit_double(c.*m);
                   }});
    };
    add_real("mass_kg", &ExperimentConfig::mass_kg);
    add_real("slit_half_separation_nm",
             &ExperimentConfig::slit_half_separation_nm);
    add_real("sigma_rho_nm", &ExperimentConfig::sigma_rho_nm);
    add_real("sigma_s_nm", &ExperimentConfig::sigma_s_nm);
    add_real("t_final_ns", &ExperimentConfig::t_final_ns);
    add_real("grid_x_max_um", &ExperimentConfig::grid_x_max_um);
    t.push_back({"grid_cells",
                 [](ExperimentConfig& c, const std::string& v, int line) {
                   c.grid_cells = parse_number<int>(v, line, "grid_cells");
                 },
                 [](const ExperimentConfig& c, std::string& out) {
                   out = std::to_string(c.grid_cells);
                 }});
    add_real("cfl", &ExperimentConfig::cfl);
    add_real("node_epsilon", &ExperimentConfig::node_epsilon);
    t.push_back({"scheme",
                 [](ExperimentConfig& c, const std::string& v, int line) {
                   try {
                     c.scheme = parse_scheme(v);
                   } catch (const ConfigError& e) {
                     fail(line, e.what());
                   }
                 },
                 [](const ExperimentConfig& c, std::string& out) {
                   out = scheme_name(c.scheme);
                 }});
    t.push_back({"max_steps",
                 [](ExperimentConfig& c, const std::string& v, int line) {
                   c.max_steps = parse_number<long>(v, line, "max_steps");
                 },
                 [](const ExperimentConfig& c, std::string& out) {
                   out = std::to_string(c.max_steps);
                 }});
    return t;
  }();
  return table;
}

}  // namespace

const char* scheme_name(Scheme scheme) {
  return scheme == Scheme::Upwind ? "upwind" : "upwind-muscl";
}

Scheme parse_scheme(const std::string& token) {
  const std::string t = lower(trim(token));
  if (t == "upwind") return Scheme::Upwind;
  if (t == "upwind-muscl") return Scheme::UpwindMuscl;
  throw ConfigError("scheme must be 'upwind' or 'upwind-muscl', got '" +
                    token + "'");
}

ParsedConfig parse_config(std::istream& in) {
  ParsedConfig out;
  std::set<std::string> seen;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      fail(line, "expected 'key = value', got '" + text + "'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    const auto it =
        std::find_if(keys().begin(), keys().end(),
                     [&](const Key& k) { return key == k.name; });
    if (it == keys().end()) fail(line, "unknown key '" + key + "'");
    if (!seen.insert(key).second) fail(line, "duplicate key '" + key + "'");
    it->set(out.config, value, line);
  }
  for (const Key& k : keys())
    if (!seen.count(k.name)) out.defaulted_keys.push_back(k.name);
  validate(out.config);
  return out;
}

ParsedConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string format_config(const ExperimentConfig& config) {
  std::ostringstream out;
  std::string value;
  for (const Key& k : keys()) {
    k.emit(config, value);
    out << k.name << " = " << value << "\n";
  }
  return out.str();
}

}  // namespace phaseflow
