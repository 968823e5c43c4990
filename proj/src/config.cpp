#include "gbfrft/config.hpp"

#include "gbfrft/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace gbfrft {

namespace {

using V = ValueType;

const std::vector<std::string> kGradient = {"denoise-gd", "denoise-hybrid", "synth", "timevertex",
                                            "deblur"};

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {
      "graph", "transform", "denoise-grid", "denoise-gd", "denoise-hybrid",
      "synth", "timevertex", "deblur",      "selftest"};
  return names;
}

// All numeric defaults live here.
const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> schema = {
      {"seed", {}, "0", V::UInt, false, "base seed for every random draw"},
      {"convention", {}, "transform-power", V::String, false, "transform-power or shift-power"},
      {"threads", {}, "1", V::Int, false, "parallel work units"},
      {"out", {}, "results", V::Path, false, "output directory"},

      {"kind", {"graph"}, "path", V::String, false, "path, cycle, fan, star or complete"},
      {"n", {"graph"}, "4", V::Int, false, "vertex count"},
      {"directed", {"graph"}, "false", V::Bool, false, "keep one seeded orientation per edge"},
      {"weighted", {"graph"}, "false", V::Bool, false, "seeded weights in (0, 1]"},
      {"coords", {"graph"}, "", V::InputPath, false, "point CSV; builds a k-NN graph instead"},
      {"k", {"graph"}, "4", V::Int, false, "neighbors for the k-NN graph"},
      {"stem", {"graph"}, "graph", V::String, false, "output file stem"},

      {"graph1", {"transform", "denoise-grid", "denoise-gd", "denoise-hybrid"}, "", V::InputPath,
       true, "first factor (row) graph CSV"},
      {"graph2", {"transform"}, "", V::InputPath, false,
       "second factor graph CSV (2d kinds only)"},
      {"graph2", {"denoise-grid", "denoise-gd"}, "", V::InputPath, true,
       "second factor (column) graph CSV"},
      {"kind", {"transform"}, "2d-gbfrft", V::String, false,
       "2d-gfrft, 2d-gbfrft, jfrft or hybrid"},
      {"kind", {"denoise-gd"}, "2d-gbfrft", V::String, false, "2d-gfrft or 2d-gbfrft"},
      {"alpha1", {"transform"}, "0.5", V::Real, false, "first (vertex) order"},
      {"alpha2", {"transform"}, "0.5", V::Real, false, "second (column or time) order"},
      {"lambda", {"transform"}, "1", V::Real, false, "hybrid blend weight"},
      {"direction", {"transform"}, "forward", V::String, false, "forward or inverse"},
      {"input", {"transform"}, "", V::InputPath, true, "signal matrix CSV"},
      {"stem", {"transform"}, "transformed", V::String, false, "output file stem"},

      {"rxx", {"denoise-grid"}, "", V::InputPath, true, "signal covariance CSV"},
      {"rnn", {"denoise-grid"}, "", V::InputPath, true, "noise covariance CSV"},
      {"rxn", {"denoise-grid"}, "", V::InputPath, false, "signal-noise cross-covariance CSV"},
      {"degradation1", {"denoise-grid"}, "", V::InputPath, false, "G1 CSV (identity if unset)"},
      {"degradation2", {"denoise-grid"}, "", V::InputPath, false, "G2 CSV (identity if unset)"},
      {"lo1", {"denoise-grid"}, "0", V::Real, false, "first order range start"},
      {"hi1", {"denoise-grid"}, "1", V::Real, false, "first order range end"},
      {"lo2", {"denoise-grid"}, "0", V::Real, false, "second order range start"},
      {"hi2", {"denoise-grid"}, "1", V::Real, false, "second order range end"},
      {"step", {"denoise-grid", "synth"}, "0.1", V::Real, false, "grid step"},
      {"baseline", {"denoise-grid"}, "false", V::Bool, false, "tie the orders (2D-GFRFT)"},
      {"size_cap", {"denoise-grid"}, "1024", V::Int, false, "largest N1·N2 for dense statistics"},
      {"real_filter", {"denoise-grid"}, "false", V::Bool, false, "restrict h to real values"},
      {"stem", {"denoise-grid"}, "grid", V::String, false, "output file stem"},

      {"clean", {"denoise-gd", "denoise-hybrid"}, "", V::InputPath, true, "clean signal CSV"},
      {"noisy", {"denoise-gd", "denoise-hybrid"}, "", V::InputPath, true, "observed signal CSV"},
      {"stem", {"denoise-gd"}, "gd", V::String, false, "output file stem"},
      {"stem", {"denoise-hybrid"}, "hybrid", V::String, false, "output file stem"},
      {"lambda_step", {"denoise-hybrid", "timevertex"}, "0.1", V::Real, false,
       "spacing of the λ grid on [0, 1]"},

      {"lr", {"denoise-gd", "synth"}, "0.03", V::Real, false, "order learning rate"},
      {"lr", {"denoise-hybrid", "timevertex"}, "0.1", V::Real, false, "order learning rate"},
      {"lr", {"deblur"}, "0.007", V::Real, false, "order learning rate"},
      {"lr_filter", kGradient, "0", V::Real, false, "filter learning rate (0: same as lr)"},
      {"epochs", {"denoise-gd", "denoise-hybrid", "synth", "timevertex"}, "200", V::Int, false,
       "training epochs"},
      {"epochs", {"deblur"}, "120", V::Int, false, "training epochs"},
      {"init", {"denoise-gd", "denoise-hybrid", "timevertex"}, "0.5,0.5", V::String, false,
       "initial orders: 'a1,a2' or 'uniform:lo:hi'"},
      {"init", {"synth"}, "uniform:-1:1", V::String, false,
       "initial orders: 'a1,a2' or 'uniform:lo:hi'"},
      {"init", {"deblur"}, "0.8,0.8", V::String, false,
       "initial orders: 'a1,a2' or 'uniform:lo:hi'"},
      {"optimizer", kGradient, "adam", V::String, false, "adam or sgd"},
      {"real_filter", kGradient, "false", V::Bool, false, "restrict h to real values"},

      {"topologies", {"synth"}, "path-cycle,path-fan,complete-star", V::StringList, false,
       "factor pairs"},
      {"variants", {"synth"}, "UU,UW,DU,DW", V::StringList, false,
       "directed/weighted variants"},
      {"sigma2", {"synth"}, "0.5,1.0,1.5", V::RealList, false, "noise variances"},
      {"methods", {"synth"}, "grid-gfrft,grid-gbfrft,gd-gfrft,gd-gbfrft", V::StringList, false,
       "designers to run"},
      {"lo", {"synth"}, "0", V::Real, false, "grid range start (both orders)"},
      {"hi", {"synth"}, "1", V::Real, false, "grid range end (both orders)"},
      {"trials", {"synth", "timevertex"}, "1", V::Int, false, "noise realizations per cell"},
      {"stem", {"synth"}, "synthetic", V::String, false, "output file stem"},

      {"values", {"timevertex"}, "", V::InputPath, true, "N×T series CSV"},
      {"coords", {"timevertex"}, "", V::InputPath, true, "N×d coordinate CSV"},
      {"k", {"timevertex"}, "3,4,5", V::IntList, false, "k-NN neighbor counts"},
      {"sigma2", {"timevertex"}, "0.6,0.9,1.2", V::RealList, false, "noise variances"},
      {"methods", {"timevertex"}, "2d-gfrft,2d-gbfrft,jfrft,hybrid", V::StringList, false,
       "transforms to train"},
      {"stem", {"timevertex"}, "timevertex", V::String, false, "output file stem"},

      {"clean", {"deblur"}, "", V::StringList, false, "clean PGM frames (synthetic if unset)"},
      {"blurred", {"deblur"}, "", V::StringList, false, "blurred PGM frames"},
      {"size", {"deblur"}, "60", V::Int, false, "synthetic frame side length"},
      {"frames", {"deblur"}, "3", V::Int, false, "synthetic frame count"},
      {"patch", {"deblur"}, "20", V::Int, false, "patch side length"},
      {"blur_size", {"deblur"}, "5", V::Int, false, "synthetic Gaussian blur window"},
      {"blur_sigma", {"deblur"}, "1", V::Real, false, "synthetic Gaussian blur deviation"},
      {"method", {"deblur"}, "2d-gbfrft", V::String, false, "2d-gfrft, 2d-gbfrft or jfrft"},
      {"knn", {"deblur"}, "4", V::Int, false, "pixel graph neighbors"},
      {"heatmap", {"deblur"}, "false", V::Bool, false, "write per-frame error heatmaps"},
      {"stem", {"deblur"}, "deblur", V::String, false, "output file stem"},

      {"stem", {"selftest"}, "selftest", V::String, false, "output file stem"},
  };
  return schema;
}

std::vector<ConfigKey> keys_for(std::string_view subcommand) {
  std::vector<ConfigKey> out;
  for (const ConfigKey& k : config_schema()) {
    const bool applies =
        k.subcommands.empty() ||
        std::find(k.subcommands.begin(), k.subcommands.end(), subcommand) != k.subcommands.end();
    if (applies) out.push_back(k);
  }
  return out;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(trim(std::string_view(s).substr(
        start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
bool parse_number(const std::string& s, T& out) {
  std::string_view v = s;
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  if (v.empty()) return false;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  return ec == std::errc() && ptr == v.data() + v.size();
}

bool parse_bool_value(const std::string& s, bool& out) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return out = true, true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return out = false, true;
  return false;
}

// Checks that `value` is well formed for `type`; returns an error message or "".
std::string check_value(const ConfigKey& k, const std::string& value) {
  if (value.empty()) return {};
  long long i = 0;
  std::uint64_t u = 0;
  double d = 0.0;
  bool b = false;
  switch (k.type) {
    case V::String:
    case V::Path:
    case V::StringList: return {};
    case V::Int: return parse_number(value, i) ? "" : "expected an integer";
    case V::UInt: return parse_number(value, u) ? "" : "expected an unsigned 64-bit integer";
    case V::Real: return parse_number(value, d) ? "" : "expected a number";
    case V::Bool: return parse_bool_value(value, b) ? "" : "expected true or false";
    case V::RealList:
      for (const auto& item : split_list(value))
        if (!parse_number(item, d)) return "expected a comma-separated list of numbers";
      return {};
    case V::IntList:
      for (const auto& item : split_list(value))
        if (!parse_number(item, i)) return "expected a comma-separated list of integers";
      return {};
    case V::InputPath:
      return std::filesystem::exists(value) ? "" : "input file does not exist: " + value;
  }
  return {};
}

}  // namespace

std::pair<std::string, std::string> split_assignment(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) {
    fail(ErrorKind::ParseError, "expected key=value, found '" + std::string(text) + "'");
  }
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

std::vector<KeyValue> parse_key_values(std::string_view text, const std::string& source) {
  std::vector<KeyValue> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      fail(ErrorKind::ParseError,
           source + ":" + std::to_string(line_no) + ": expected key=value, found '" + body + "'");
    }
    out.push_back({trim(std::string_view(body).substr(0, eq)),
                   trim(std::string_view(body).substr(eq + 1)), line_no});
  }
  return out;
}

RunConfig parse_config(const std::string& subcommand, const std::filesystem::path& file,
                       const std::vector<std::pair<std::string, std::string>>& overrides) {
  const auto& names = subcommand_names();
  if (std::find(names.begin(), names.end(), subcommand) == names.end()) {
    fail(ErrorKind::ParseError, "unknown subcommand '" + subcommand + "'");
  }
  const std::vector<ConfigKey> keys = keys_for(subcommand);
  auto find_key = [&](const std::string& name) -> const ConfigKey* {
    for (const ConfigKey& k : keys)
      if (k.key == name) return &k;
    return nullptr;
  };

  RunConfig cfg;
  cfg.subcommand = subcommand;
  for (const ConfigKey& k : keys) cfg.values[k.key] = k.fallback;

  auto assign = [&](const std::string& key, const std::string& value, const std::string& where) {
    const ConfigKey* k = find_key(key);
    if (!k) fail(ErrorKind::ParseError, where + ": unknown key '" + key + "' for " + subcommand);
    const std::string problem = check_value(*k, value);
    if (!problem.empty()) fail(ErrorKind::ParseError, where + ": key '" + key + "': " + problem);
    cfg.values[key] = value;
  };

  if (!file.empty()) {
    const std::string source = file.string();
    if (!std::filesystem::exists(file)) {
      fail(ErrorKind::ParseError, "config file does not exist: " + source);
    }
    std::ostringstream text;
    text << std::ifstream(file).rdbuf();
    for (const KeyValue& kv : parse_key_values(text.str(), source)) {
      assign(kv.key, kv.value, source + ":" + std::to_string(kv.line));
    }
  }
  for (const auto& [key, value] : overrides) assign(key, value, "flag " + key);

  for (const ConfigKey& k : keys) {
    if (k.required && cfg.values[k.key].empty()) {
      fail(ErrorKind::ParseError, "missing required key '" + k.key + "' for " + subcommand);
    }
  }
  try {
    parse_convention(cfg.get("convention"));
  } catch (const Error& e) {
    fail(ErrorKind::ParseError, std::string("key 'convention': ") + e.what());
  }
  return cfg;
}

const std::string& RunConfig::get(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) {
    fail(ErrorKind::InvalidArgument, "key '" + key + "' is not defined for " + subcommand);
  }
  return it->second;
}

long long RunConfig::get_int(const std::string& key) const {
  long long v = 0;
  if (!parse_number(get(key), v)) fail(ErrorKind::ParseError, "key '" + key + "': expected an integer");
  return v;
}

std::uint64_t RunConfig::get_uint(const std::string& key) const {
  std::uint64_t v = 0;
  if (!parse_number(get(key), v)) {
    fail(ErrorKind::ParseError, "key '" + key + "': expected an unsigned integer");
  }
  return v;
}

double RunConfig::get_real(const std::string& key) const {
  double v = 0.0;
  if (!parse_number(get(key), v)) fail(ErrorKind::ParseError, "key '" + key + "': expected a number");
  return v;
}

bool RunConfig::get_bool(const std::string& key) const {
  bool v = false;
  if (!parse_bool_value(get(key), v)) {
    fail(ErrorKind::ParseError, "key '" + key + "': expected true or false");
  }
  return v;
}

std::filesystem::path RunConfig::get_path(const std::string& key) const { return get(key); }

std::vector<double> RunConfig::get_reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(get(key))) {
    double v = 0.0;
    if (!parse_number(item, v)) fail(ErrorKind::ParseError, "key '" + key + "': bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<int> RunConfig::get_ints(const std::string& key) const {
  std::vector<int> out;
  for (const auto& item : split_list(get(key))) {
    int v = 0;
    if (!parse_number(item, v)) fail(ErrorKind::ParseError, "key '" + key + "': bad integer '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> RunConfig::get_strings(const std::string& key) const {
  return split_list(get(key));
}

Convention RunConfig::convention() const { return parse_convention(get("convention")); }

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  j["subcommand"] = subcommand;
  nlohmann::json v = nlohmann::json::object();
  for (const auto& [key, value] : values) v[key] = value;
  j["config"] = v;
  return j;
}

std::string describe_schema(std::string_view subcommand) {
  const std::vector<ConfigKey> keys = keys_for(subcommand);
  std::size_t kw = 3, dw = 7;
  for (const ConfigKey& k : keys) {
    kw = std::max(kw, k.key.size());
    dw = std::max(dw, k.fallback.size() + (k.required ? 10 : 0));
  }
  std::ostringstream out;
  for (const ConfigKey& k : keys) {
    std::string def = k.required ? "(required)" : k.fallback;
    out << "  " << k.key << std::string(kw - k.key.size() + 2, ' ') << def
        << std::string(dw - std::min(dw, def.size()) + 2, ' ') << k.help << '\n';
  }
  return out.str();
}

}  // namespace gbfrft
