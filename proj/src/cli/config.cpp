#include "exciplex/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "exciplex/constants.hpp"

namespace exciplex::cli {

using namespace constants;

ConfigParseError::ConfigParseError(std::string source, int line, std::string key,
                                   const std::string& what)
    : ConfigError(source + (line > 0 ? ":" + std::to_string(line) : std::string()) +
                  (key.empty() ? std::string() : " [" + key + "]") + ": " + what),
      line_(line),
      key_(std::move(key)) {}

const std::vector<Unit>& unit_table() {
  static const std::vector<Unit> units = {
      {"K", Dimension::temperature, 1.0},
      {"Pa", Dimension::pressure, 1.0},
      {"kPa", Dimension::pressure, 1e3},
      {"mbar", Dimension::pressure, millibar},
      {"bar", Dimension::pressure, bar},
      {"per_m3", Dimension::density, 1.0},
      {"per_cm3", Dimension::density, per_cm3},
      {"m", Dimension::length, 1.0},
      {"mm", Dimension::length, millimetre},
      {"um", Dimension::length, micrometre},
      {"nm", Dimension::length, 1e-9},
      {"A", Dimension::length, angstrom},
      {"m2", Dimension::area, 1.0},
      {"um2", Dimension::area, 1e-12},
      {"A2", Dimension::area, angstrom2},
      {"s", Dimension::time, 1.0},
      {"ms", Dimension::time, 1e-3},
      {"us", Dimension::time, 1e-6},
      {"ns", Dimension::time, 1e-9},
      {"ps", Dimension::time, picosecond},
      {"fs", Dimension::time, femtosecond},
      {"Hz", Dimension::frequency, two_pi},
      {"kHz", Dimension::frequency, two_pi * 1e3},
      {"MHz", Dimension::frequency, two_pi * 1e6},
      {"GHz", Dimension::frequency, two_pi * 1e9},
      {"THz", Dimension::frequency, two_pi * 1e12},
      {"W", Dimension::power, 1.0},
      {"mW", Dimension::power, 1e-3},
      {"W_per_mK", Dimension::conductivity, 1.0},
      {"Cm", Dimension::dipole, 1.0},
      {"m_per_s", Dimension::velocity, 1.0},
  };
  return units;
}

namespace {

const Unit* find_unit(const std::string& suffix) {
  for (const auto& u : unit_table())
    if (u.suffix == suffix) return &u;
  return nullptr;
}

double unit_factor(const std::string& suffix) {
  const Unit* u = find_unit(suffix);
  return u ? u->to_si : 1.0;
}

std::string dimension_name(Dimension d) {
  switch (d) {
    case Dimension::dimensionless: return "dimensionless";
    case Dimension::count: return "count";
    case Dimension::temperature: return "temperature";
    case Dimension::pressure: return "pressure";
    case Dimension::density: return "number density";
    case Dimension::length: return "length";
    case Dimension::area: return "area";
    case Dimension::time: return "time";
    case Dimension::frequency: return "frequency";
    case Dimension::power: return "power";
    case Dimension::conductivity: return "thermal conductivity";
    case Dimension::dipole: return "dipole moment";
    case Dimension::velocity: return "velocity";
  }
  return "?";
}

bool unitless(Dimension d) { return d == Dimension::dimensionless || d == Dimension::count; }

}  // namespace

const std::vector<ParameterSpec>& parameter_table() {
  using D = Dimension;
  static const std::vector<ParameterSpec> table = {
      {"gas", "temperature", D::temperature, 300.0, "K", "gas temperature T"},
      {"gas", "dopant_pressure", D::pressure, 1.0 * millibar, "mbar", "dopant (Rb) partial pressure"},
      {"gas", "buffer_pressure", D::pressure, 10.0 * bar, "bar", "buffer (Ar) partial pressure"},
      {"fibre", "inner_radius", D::length, 20.0 * micrometre, "um", "core radius r"},
      {"fibre", "outer_radius", D::length, 70.0 * micrometre, "um", "cladding radius r_e"},
      {"fibre", "length", D::length, 0.01, "m", "fibre length l"},
      {"fibre", "wall_conductivity", D::conductivity, 0.8, "W_per_mK", "glass conductivity k_g"},
      {"fibre", "gas_conductivity", D::conductivity, 0.03, "W_per_mK", "gas conductivity k_a"},
      {"exciplex", "upconversion", D::frequency, angular(6.7154e12), "THz", "loss per cycle Omega"},
      {"exciplex", "linewidth", D::frequency, angular(5.75e6), "MHz", "spontaneous decay gamma"},
      {"exciplex", "dipole", D::dipole, 2.537e-29, "Cm", "bare dipole d_eg"},
      {"exciplex", "franck_condon_factor", D::dimensionless, 0.8, "", "dipole reduction f_FC"},
      {"drive", "input_power", D::power, 1.0, "W", "input power P_in"},
      {"drive", "cooling_cross_section", D::area, 20.0 * angstrom2, "A2", "sigma_cool"},
      {"drive", "pulse_duration", D::time, 1.0 * picosecond, "ps", "absorption time tau"},
      {"scan", "points", D::count, 201, "", "samples along each power profile"},
      {"bloch", "pairs", D::count, 5, "", "number of (D, gamma) pairs"},
      {"bloch", "ratio_min", D::dimensionless, 0.1, "", "smallest D/gamma"},
      {"bloch", "ratio_max", D::dimensionless, 10.0, "", "largest D/gamma"},
      {"bloch", "trajectories", D::count, 20000, "", "Monte-Carlo trajectories per pair"},
      {"bloch", "samples", D::count, 101, "", "time samples per pair"},
      {"bloch", "bins", D::count, 50, "", "histogram bins in cos(theta)"},
      {"heat", "ambient", D::temperature, 300.0, "K", "outer boundary temperature T_e"},
      {"heat", "cells_per_core_radius", D::dimensionless, 8.0, "", "grid resolution"},
      {"heat", "rings", D::count, 2, "", "hexagonal shells around the central core"},
      {"heat", "section_width", D::length, 5.0 * micrometre, "um", "radial section bin width"},
      {"wavepacket", "temperature", D::temperature, 300.0, "K", "sets k0 via E_av = 3/2 k_B T"},
      {"wavepacket", "rabi", D::frequency, angular(5e9), "GHz", "bare Rabi frequency chi_R"},
      {"wavepacket", "detuning", D::frequency, angular(5.2e12), "THz", "omega_0 - omega_L"},
      {"wavepacket", "dt", D::time, 0.1 * femtosecond, "fs", "time step"},
      {"wavepacket", "intervals", D::count, 4096, "", "grid intervals on [r_min, r_max]"},
      {"wavepacket", "r_min", D::length, 1.0 * angstrom, "A", "hard wall"},
      {"wavepacket", "r_max", D::length, 200.0 * angstrom, "A", "outer edge"},
      {"wavepacket", "sample_every", D::count, 10, "", "steps between observables"},
      {"wavepacket", "snapshot_every", D::count, 500, "", "steps between density snapshots"},
      {"wavepacket", "snapshot_stride", D::count, 8, "", "grid decimation of snapshots"},
      {"scattering", "temperature", D::temperature, 300.0, "K", "thermal average temperature"},
      {"scattering", "v_min", D::velocity, 50.0, "m_per_s", "smallest speed of the sigma(v) scan"},
      {"scattering", "v_max", D::velocity, 2000.0, "m_per_s", "largest speed of the sigma(v) scan"},
      {"scattering", "k_points", D::count, 40, "", "points of the sigma(v) scan"},
      {"scattering", "panels", D::count, 4, "", "32-point Gauss panels for the thermal average"},
      {"gas_cell", "ambient", D::temperature, 620.0, "K", "cell temperature T_e"},
      {"gas_cell", "buffer_density", D::density, 1e21 * per_cm3, "per_cm3", "n_A"},
      {"gas_cell", "dopant_density", D::density, 1e16 * per_cm3, "per_cm3", "n_R"},
      {"gas_cell", "beam_radius", D::length, 1.5 * millimetre, "mm", "pump beam radius"},
      {"gas_cell", "input_power", D::power, 2.5, "W", "pump power"},
      {"gas_cell", "gas_length", D::length, 10.0 * millimetre, "mm", "gas column length"},
      {"gas_cell", "cell_radius", D::length, 5.0 * millimetre, "mm", "cell radius"},
      {"gas_cell", "window_thickness", D::length, 3.0 * millimetre, "mm", "sapphire window thickness"},
      {"gas_cell", "window_conductivity", D::conductivity, 2.0, "W_per_mK", "k_sap"},
      {"gas_cell", "gas_conductivity", D::conductivity, 0.03, "W_per_mK", "gas conductivity"},
      {"gas_cell", "grid", D::length, 50.0 * micrometre, "um", "cell size of the (rho, z) grid"},
      {"table1", "simulate_absorption_time", D::count, 1, "", "1 runs the collision for tau"},
  };
  return table;
}

const std::vector<ChoiceSpec>& choice_table() {
  static const std::vector<ChoiceSpec> table = {
      {"wavepacket", "boundary", {"reflective", "absorbing"}, "outer boundary at r_max"},
      {"scattering", "barrier", {"energy_minus_upconversion", "energy"},
       "energy the centrifugal barrier is compared with for l_cut"},
      {"bloch", "pulse_area", {"matched", "literal"}, "pulse angle of the Monte-Carlo walk"},
      {"bloch", "durations", {"fixed", "exponential"}, "pulse length distribution"},
  };
  return table;
}

namespace {

const ParameterSpec* find_parameter(const std::string& qualified) {
  for (const auto& p : parameter_table())
    if (p.qualified() == qualified) return &p;
  return nullptr;
}

const ChoiceSpec* find_choice(const std::string& qualified) {
  for (const auto& c : choice_table())
    if (c.qualified() == qualified) return &c;
  return nullptr;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_double(const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

struct Resolved {
  const ParameterSpec* spec;
  double factor;
};

// Splits `name_unit` against the parameters of `section`.
Resolved resolve_key(const std::string& section, const std::string& key,
                     const std::string& source, int line) {
  const std::string label = section.empty() ? key : section + "." + key;
  for (const auto& p : parameter_table()) {
    if (p.section != section) continue;
    if (key == p.name) {
      if (unitless(p.dimension)) return {&p, 1.0};
      throw ConfigParseError(source, line, label,
                             "missing unit suffix, e.g. " + p.name + "_" + p.display_unit);
    }
    if (key.size() > p.name.size() + 1 && key.compare(0, p.name.size(), p.name) == 0 &&
        key[p.name.size()] == '_') {
      const std::string suffix = key.substr(p.name.size() + 1);
      const Unit* u = find_unit(suffix);
      if (!u) continue;
      if (unitless(p.dimension))
        throw ConfigParseError(source, line, label, p.name + " takes no unit");
      if (u->dimension != p.dimension)
        throw ConfigParseError(source, line, label,
                               "unit '" + suffix + "' is not a " + dimension_name(p.dimension) +
                                   " unit");
      return {&p, u->to_si};
    }
  }
  throw ConfigParseError(source, line, label, "unknown key");
}

void assign(RunConfig& cfg, const std::string& section, const std::string& key,
            const std::string& value, int line) {
  const std::string& src = cfg.source;
  const std::string label = section.empty() ? key : section + "." + key;
  if (value.empty()) throw ConfigParseError(src, line, label, "empty value");

  if (section.empty()) {
    if (key == "scenario") {
      cfg.scenario = value;
    } else if (key == "preset") {
      if (!has_preset(value)) throw ConfigParseError(src, line, label, "unknown preset '" + value + "'");
      cfg.preset = value;
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else if (key == "seed" || key == "threads") {
      std::uint64_t v = 0;
      const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
      if (res.ec != std::errc() || res.ptr != value.data() + value.size())
        throw ConfigParseError(src, line, label, "expected a non-negative integer");
      if (key == "seed")
        cfg.seed = v;
      else
        cfg.threads = static_cast<unsigned>(v);
    } else {
      throw ConfigParseError(src, line, label, "unknown key");
    }
    return;
  }

  if (section == "sweep") {
    static const std::vector<std::string> keys = {"parameter", "start", "stop", "count", "spacing"};
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ConfigParseError(src, line, label, "unknown key");
    cfg.sweep_spec[key] = value;
    resolve_sweep(cfg);  // early syntax check once enough fields are present
    return;
  }

  if (const ChoiceSpec* c = find_choice(label)) {
    if (std::find(c->allowed.begin(), c->allowed.end(), value) == c->allowed.end()) {
      std::string options;
      for (const auto& a : c->allowed) options += (options.empty() ? "" : ", ") + a;
      throw ConfigParseError(src, line, label, "must be one of: " + options);
    }
    cfg.choices[label] = value;
    return;
  }

  const Resolved r = resolve_key(section, key, src, line);
  const auto v = parse_double(value);
  if (!v) throw ConfigParseError(src, line, label, "not a number: '" + value + "'");
  if (r.spec->dimension == Dimension::count && (*v < 0 || std::floor(*v) != *v))
    throw ConfigParseError(src, line, label, "expected a non-negative integer");
  if (!unitless(r.spec->dimension) && *v < 0)
    throw ConfigParseError(src, line, label, "must not be negative");
  cfg.values[r.spec->qualified()] = *v * r.factor;
}

}  // namespace

double RunConfig::get(const std::string& qualified) const {
  if (auto it = values.find(qualified); it != values.end()) return it->second;
  const ParameterSpec* p = find_parameter(qualified);
  if (!p) throw ConfigError("no parameter named " + qualified);
  return p->default_si;
}

std::size_t RunConfig::count(const std::string& qualified) const {
  return static_cast<std::size_t>(std::llround(get(qualified)));
}

std::string RunConfig::choice(const std::string& qualified) const {
  if (auto it = choices.find(qualified); it != choices.end()) return it->second;
  const ChoiceSpec* c = find_choice(qualified);
  if (!c) throw ConfigError("no setting named " + qualified);
  return c->allowed.front();
}

bool RunConfig::is_set(const std::string& qualified) const {
  return values.count(qualified) > 0 || choices.count(qualified) > 0;
}

void RunConfig::set(const std::string& qualified, double si_value) {
  if (!find_parameter(qualified)) throw ConfigError("no parameter named " + qualified);
  values[qualified] = si_value;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  RunConfig cfg;
  cfg.source = source;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    if (const auto hash = s.find_first_of("#;"); hash != std::string::npos) s.erase(hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigParseError(source, line, "", "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      static const std::vector<std::string> known = {"gas", "fibre", "exciplex", "drive", "scan",
                                                     "bloch", "heat", "wavepacket", "scattering",
                                                     "gas_cell", "table1", "sweep"};
      if (std::find(known.begin(), known.end(), section) == known.end())
        throw ConfigParseError(source, line, section, "unknown section");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigParseError(source, line, "", "expected key = value");
    assign(cfg, section, trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line);
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << is.rdbuf();
  return parse_config(buf.str(), path.string());
}

void apply_override(RunConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigParseError("--override", 0, assignment, "expected key=value");
  const std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  const auto dot = key.find('.');
  const std::string saved = config.source;
  config.source = "--override";
  if (dot == std::string::npos)
    assign(config, "", key, value, 0);
  else
    assign(config, key.substr(0, dot), key.substr(dot + 1), value, 0);
  config.source = saved;
}

std::optional<Sweep> resolve_sweep(const RunConfig& config) {
  const auto& f = config.sweep_spec;
  if (f.empty()) return std::nullopt;
  const auto field = [&](const std::string& k) -> const std::string* {
    auto it = f.find(k);
    return it == f.end() ? nullptr : &it->second;
  };
  const auto fail = [&](const std::string& what) -> ConfigParseError {
    return ConfigParseError(config.source, 0, "sweep", what);
  };
  const std::string* param = field("parameter");
  const std::string* start = field("start");
  const std::string* stop = field("stop");
  const std::string* count = field("count");
  if (!param || !start || !stop || !count) {
    // partially filled while parsing; complete check happens in validate()
    return std::nullopt;
  }
  const auto dot = param->find('.');
  if (dot == std::string::npos) throw fail("parameter must be section.key, e.g. gas.buffer_pressure_bar");
  const Resolved r = resolve_key(param->substr(0, dot), param->substr(dot + 1), config.source, 0);
  const auto a = parse_double(*start), b = parse_double(*stop), n = parse_double(*count);
  if (!a || !b) throw fail("start and stop must be numbers");
  if (!n || *n < 1 || std::floor(*n) != *n) throw fail("count must be a positive integer");
  const auto points = static_cast<std::size_t>(*n);
  if (points > 1 && !(*b > *a)) throw fail("empty sweep range (need stop > start)");
  const std::string spacing = field("spacing") ? *field("spacing") : "linear";
  if (spacing != "linear" && spacing != "log") throw fail("spacing must be linear or log");
  if (spacing == "log" && !(*a > 0)) throw fail("log spacing needs start > 0");

  Sweep s;
  s.parameter = r.spec->qualified();
  s.unit = param->substr(dot + 1 + r.spec->name.size());
  if (!s.unit.empty()) s.unit.erase(0, 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    const double v = spacing == "log" ? *a * std::pow(*b / *a, t) : *a + (*b - *a) * t;
    s.values.push_back(v * r.factor);
  }
  return s;
}

void validate(const RunConfig& config) {
  const std::string& src = config.source;
  if (!config.sweep_spec.empty()) {
    for (const char* k : {"parameter", "start", "stop", "count"})
      if (!config.sweep_spec.count(k))
        throw ConfigParseError(src, 0, std::string("sweep.") + k, "missing");
    resolve_sweep(config);
  }
  for (const auto& p : parameter_table()) {
    if (!config.values.count(p.qualified())) continue;
    const double v = config.values.at(p.qualified());
    const bool must_be_positive =
        p.dimension == Dimension::temperature || p.dimension == Dimension::length ||
        p.dimension == Dimension::time || p.dimension == Dimension::conductivity ||
        p.dimension == Dimension::dipole;
    if (must_be_positive && !(v > 0))
      throw ConfigParseError(src, 0, p.qualified(), "must be positive");
  }
  if (config.get("fibre.inner_radius") >= config.get("fibre.outer_radius"))
    throw ConfigParseError(src, 0, "fibre.inner_radius", "must be smaller than fibre.outer_radius");
  if (config.get("wavepacket.r_min") >= config.get("wavepacket.r_max"))
    throw ConfigParseError(src, 0, "wavepacket.r_min", "must be smaller than wavepacket.r_max");
  if (config.get("scattering.v_min") >= config.get("scattering.v_max"))
    throw ConfigParseError(src, 0, "scattering.v_min", "must be smaller than scattering.v_max");
  if (config.get("bloch.ratio_min") <= 0 || config.get("bloch.ratio_min") > config.get("bloch.ratio_max"))
    throw ConfigParseError(src, 0, "bloch.ratio_min", "need 0 < ratio_min <= ratio_max");
  const double f = config.get("exciplex.franck_condon_factor");
  if (!(f > 0 && f <= 1))
    throw ConfigParseError(src, 0, "exciplex.franck_condon_factor", "must lie in (0, 1]");
  for (const char* k : {"scan.points", "bloch.pairs", "bloch.trajectories", "bloch.samples",
                        "bloch.bins", "wavepacket.sample_every", "scattering.k_points",
                        "scattering.panels", "wavepacket.snapshot_stride"})
    if (config.count(k) < 1) throw ConfigParseError(src, 0, k, "must be at least 1");
  if (config.count("scan.points") < 2) throw ConfigParseError(src, 0, "scan.points", "must be at least 2");
  if (config.count("wavepacket.intervals") < 16)
    throw ConfigParseError(src, 0, "wavepacket.intervals", "must be at least 16");
}

std::string display_value(const ParameterSpec& spec, double si_value) {
  const double factor = spec.display_unit.empty() ? 1.0 : unit_factor(spec.display_unit);
  std::ostringstream os;
  os.precision(12);
  os << si_value / factor;
  return os.str();
}

Preset build_preset(const RunConfig& config) {
  const Preset base = preset_by_name(config.preset);
  const double t = config.get("gas.temperature");
  GasMixture mix(base.mixture.dopant_mass(), base.mixture.buffer_mass(),
                 number_density(config.get("gas.dopant_pressure"), t),
                 number_density(config.get("gas.buffer_pressure"), t), t);
  FibreGeometry fibre(config.get("fibre.inner_radius"), config.get("fibre.outer_radius"),
                      config.get("fibre.length"), config.get("fibre.wall_conductivity"),
                      config.get("fibre.gas_conductivity"));
  const ExciplexSpec& ex = base.exciplex;
  ExciplexSpec exciplex(ex.ground(), ex.excited(), ex.bare_transition(),
                        config.get("exciplex.linewidth"), config.get("exciplex.dipole"),
                        config.get("exciplex.upconversion"),
                        config.get("exciplex.franck_condon_factor"));
  DriveSpec drive(config.get("drive.input_power"), config.get("drive.cooling_cross_section"),
                  config.get("drive.pulse_duration"), base.drive.laser_bandwidth());
  return {base.name, mix, fibre, exciplex, drive};
}

}  // namespace exciplex::cli
