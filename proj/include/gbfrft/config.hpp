#pragma once

#include "gbfrft/transforms.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gbfrft {

enum class ValueType { String, Int, UInt, Real, Bool, RealList, IntList, StringList, Path, InputPath };

/// One row of the option table. An empty subcommand list means every
/// subcommand accepts the key. A key may appear in several rows with
/// different defaults for different subcommands.
struct ConfigKey {
  std::string key;
  std::vector<std::string> subcommands;
  std::string fallback;
  ValueType type = ValueType::String;
  bool required = false;
  std::string help;
};

const std::vector<ConfigKey>& config_schema();
const std::vector<std::string>& subcommand_names();

/// Rows of the schema that apply to one subcommand, in table order.
std::vector<ConfigKey> keys_for(std::string_view subcommand);

struct RunConfig {
  std::string subcommand;
  std::map<std::string, std::string> values;

  const std::string& get(const std::string& key) const;
  bool is_set(const std::string& key) const { return !get(key).empty(); }
  long long get_int(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key) const;
  double get_real(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::filesystem::path get_path(const std::string& key) const;
  std::vector<double> get_reals(const std::string& key) const;
  std::vector<int> get_ints(const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& key) const;

  std::uint64_t seed() const { return get_uint("seed"); }
  int threads() const { return static_cast<int>(get_int("threads")); }
  Convention convention() const;
  std::filesystem::path output_dir() const { return get_path("out"); }

  /// Every resolved key, enough to re-run the command.
  nlohmann::json to_json() const;
};

struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
};

/// key=value text; '#' starts a comment. Errors name the source and line.
std::vector<KeyValue> parse_key_values(std::string_view text, const std::string& source);

/// Resolves defaults, then the file (if non-empty), then `overrides` in
/// order. Unknown keys, malformed values, missing required keys and missing
/// input files raise ParseError.
RunConfig parse_config(const std::string& subcommand, const std::filesystem::path& file,
                       const std::vector<std::pair<std::string, std::string>>& overrides);

/// Splits "key=value".
std::pair<std::string, std::string> split_assignment(std::string_view text);

/// Schema as an aligned text table.
std::string describe_schema(std::string_view subcommand);

}  // namespace gbfrft
