#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "exciplex/core_model.hpp"
#include "exciplex/errors.hpp"

namespace exciplex::cli {

/// Parse or validation failure with the offending line (0 if not from a file) and key.
class ConfigParseError : public ConfigError {
 public:
  ConfigParseError(std::string source, int line, std::string key, const std::string& what);
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

enum class Dimension {
  dimensionless,
  count,
  temperature,
  pressure,
  density,
  length,
  area,
  time,
  frequency,  // given in cyclic units, stored angular
  power,
  conductivity,
  dipole,
  velocity,
};

struct Unit {
  std::string suffix;
  Dimension dimension;
  double to_si;
};

/// Accepted unit suffixes.
const std::vector<Unit>& unit_table();

/// One configurable quantity. In a file the key is written as
/// `<name>_<unit suffix>` inside `[section]`, e.g. `buffer_pressure_bar = 10`
/// in `[gas]`; counts and dimensionless numbers carry no suffix.
struct ParameterSpec {
  std::string section;
  std::string name;
  Dimension dimension;
  double default_si;
  std::string display_unit;  // suffix used when echoing the value
  std::string description;

  std::string qualified() const { return section + "." + name; }
};

const std::vector<ParameterSpec>& parameter_table();

/// String-valued settings with a fixed set of admissible values.
struct ChoiceSpec {
  std::string section;
  std::string name;
  std::vector<std::string> allowed;  // first entry is the default
  std::string description;

  std::string qualified() const { return section + "." + name; }
};

const std::vector<ChoiceSpec>& choice_table();

struct Sweep {
  std::string parameter;        // qualified name, e.g. gas.buffer_pressure
  std::string unit;             // suffix the range was given in
  std::vector<double> values;   // SI
};

struct RunConfig {
  std::string scenario;
  std::string preset = "Rb-Ar";
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string output_dir = "out";
  std::string source = "<config>";
  std::map<std::string, double> values;         // explicitly set, SI
  std::map<std::string, std::string> choices;   // explicitly set
  std::map<std::string, std::string> sweep_spec;  // raw [sweep] entries

  /// SI value of a parameter, falling back to its default.
  double get(const std::string& qualified) const;
  std::size_t count(const std::string& qualified) const;
  std::string choice(const std::string& qualified) const;
  bool is_set(const std::string& qualified) const;
  void set(const std::string& qualified, double si_value);
};

/// Flat INI-style text: `key = value` lines, `[section]` headers, `#` or `;` comments.
/// Top-level keys: scenario, preset, seed, threads, output_dir. A `[sweep]`
/// section takes parameter (e.g. gas.buffer_pressure_bar), start, stop, count
/// and spacing (linear or log); start and stop are in the parameter's unit.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// `section.key=value` (or a top-level key) applied with the same rules as the file.
void apply_override(RunConfig& config, const std::string& assignment);

/// The sweep described by the [sweep] entries, if any; throws ConfigParseError
/// for an empty or malformed range.
std::optional<Sweep> resolve_sweep(const RunConfig& config);

/// Range checks that need the whole configuration; throws ConfigParseError.
void validate(const RunConfig& config);

/// Resolved parameters converted back to their display unit, for manifests.
std::string display_value(const ParameterSpec& spec, double si_value);

/// Preset with the gas, fibre, exciplex and drive parameters of the config applied.
Preset build_preset(const RunConfig& config);

}  // namespace exciplex::cli
