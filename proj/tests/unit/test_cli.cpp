#include <doctest.h>

#include "approx.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "exciplex/cli/config.hpp"
#include "exciplex/cli/scenarios.hpp"
#include "exciplex/csv.hpp"

using namespace exciplex;
using namespace exciplex::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "exciplex_cli_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> digests(const RunManifest& m) {
  std::map<std::string, std::string> out;
  for (const auto& f : m.files) out[f.path] = f.sha256;
  return out;
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(EXCIPLEX_COOL_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config values are converted to SI") {
  const auto c = parse_config(
      "scenario = fig4a\nseed = 7\n[gas]\nbuffer_pressure_bar = 20\n"
      "dopant_pressure_mbar = 2 # comment\n; another\n[fibre]\ninner_radius_um = 15\n");
  CHECK(c.scenario == "fig4a");
  CHECK(c.seed == 7);
  CHECK(c.get("gas.buffer_pressure") == rel(2e6));
  CHECK(c.get("gas.dopant_pressure") == rel(200.0));
  CHECK(c.get("fibre.inner_radius") == rel(15e-6));
  CHECK(c.is_set("gas.buffer_pressure"));
  CHECK_FALSE(c.is_set("gas.temperature"));
  CHECK(c.get("gas.temperature") == 300.0);
}

TEST_CASE("bad keys and units report line and key") {
  try {
    parse_config("scenario = fig4a\n[gas]\nbogus_K = 3\n");
    FAIL("expected a parse error");
  } catch (const ConfigParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.key() == "gas.bogus_K");
  }
  CHECK_THROWS_AS(parse_config("[gas]\nbuffer_pressure_K = 3\n"), ConfigParseError);
  CHECK_THROWS_AS(parse_config("[gas]\nbuffer_pressure = 3\n"), ConfigParseError);
  CHECK_THROWS_AS(parse_config("[nowhere]\nx_K = 3\n"), ConfigParseError);
  CHECK_THROWS_AS(parse_config("[gas]\nbuffer_pressure_bar = ten\n"), ConfigParseError);
  CHECK_THROWS_AS(parse_config("[wavepacket]\nboundary = sideways\n"), ConfigParseError);
}

TEST_CASE("overrides use the file rules") {
  auto c = parse_config("scenario = fig4a\n");
  apply_override(c, "gas.buffer_pressure_bar=50");
  CHECK(c.get("gas.buffer_pressure") == rel(5e6));
  apply_override(c, "seed=11");
  CHECK(c.seed == 11);
  apply_override(c, "wavepacket.boundary=absorbing");
  CHECK(c.choice("wavepacket.boundary") == "absorbing");
  CHECK_THROWS_AS(apply_override(c, "gas.buffer_pressure_K=5"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "no_equals_sign"), ConfigError);
}

TEST_CASE("sweeps resolve in the parameter unit") {
  auto c = parse_config(
      "scenario = fig4a\n[sweep]\nparameter = gas.buffer_pressure_bar\nstart = 1\nstop = 100\n"
      "count = 3\nspacing = log\n");
  const auto s = resolve_sweep(c);
  REQUIRE(s.has_value());
  REQUIRE(s->values.size() == 3);
  CHECK(s->values[1] == rel(1e6));
  CHECK(s->unit == "bar");
}

TEST_CASE("empty sweep is refused before anything is written") {
  const fs::path out = scratch("empty_sweep");
  const std::string text =
      "scenario = fig4a\n[sweep]\nparameter = gas.buffer_pressure_bar\nstart = 10\nstop = 10\n"
      "count = 3\n";
  CHECK_THROWS_AS(parse_config(text), ConfigParseError);
  std::ofstream(out / "empty.ini") << text;
  CHECK(run_tool("run " + (out / "empty.ini").string() + " --out " + (out / "run").string()) == 2);
  CHECK_FALSE(fs::exists(out / "run"));
}

TEST_CASE("scenario catalogue") {
  const auto& list = list_scenarios();
  CHECK(list.size() >= 8);
  std::set<std::string> names;
  for (const auto& s : list) {
    CHECK_FALSE(s.description.empty());
    names.insert(s.name);
  }
  CHECK(names.size() == list.size());
  CHECK(list.front().name == "table1");
  for (const char* n : {"fig3_bloch", "fig4a", "fig4b", "fig4cd", "fig5_bundle", "fig7_radial",
                        "collision_movie", "xsection_scan", "gas_cell_weitz"})
    CHECK(has_scenario(n));
  CHECK_FALSE(has_scenario("fig99"));
  auto c = parse_config("scenario = fig99\n");
  CHECK_THROWS_AS(run_scenario(c), ConfigError);
}

TEST_CASE("default config reproduces the built-in preset") {
  const auto c = parse_config("scenario = table1\n");
  const Preset a = build_preset(c), b = rb_ar_preset();
  CHECK(a.mixture.buffer_density() == rel(b.mixture.buffer_density()).epsilon(1e-12));
  CHECK(a.mixture.dopant_density() == rel(b.mixture.dopant_density()).epsilon(1e-12));
  CHECK(a.fibre.inner_radius() == b.fibre.inner_radius());
  CHECK(a.fibre.outer_radius() == b.fibre.outer_radius());
  CHECK(a.exciplex.linewidth() == rel(b.exciplex.linewidth()));
  CHECK(a.exciplex.upconversion() == rel(b.exciplex.upconversion()));
  CHECK(a.drive.input_power() == b.drive.input_power());
  CHECK(a.drive.cooling_cross_section() == rel(b.drive.cooling_cross_section()));
}

TEST_CASE("runs are reproducible and independent of the thread count") {
  const fs::path out = scratch("determinism");
  auto c = parse_config("scenario = fig4a\n[scan]\npoints = 41\n");
  c.output_dir = (out / "a").string();
  c.threads = 1;
  const auto a = run_scenario(c);
  c.output_dir = (out / "b").string();
  c.threads = 2;
  const auto b = run_scenario(c);
  CHECK(digests(a) == digests(b));
  CHECK(a.files.size() >= 2);

  auto f = parse_config("scenario = fig3_bloch\nseed = 5\n[bloch]\npairs = 2\ntrajectories = 400\n");
  f.output_dir = (out / "c").string();
  f.threads = 1;
  const auto x = run_scenario(f);
  f.output_dir = (out / "d").string();
  f.threads = 2;
  const auto y = run_scenario(f);
  CHECK(digests(x) == digests(y));
  f.seed = 6;
  f.output_dir = (out / "e").string();
  CHECK(digests(run_scenario(f)) != digests(x));
}

TEST_CASE("manifest records every parameter and file digest") {
  const fs::path out = scratch("manifest");
  auto c = parse_config("scenario = fig4a\n[gas]\nbuffer_pressure_bar = 20\n[scan]\npoints = 21\n");
  c.output_dir = out.string();
  const auto m = run_scenario(c);
  const auto j = nlohmann::json::parse(slurp(out / "manifest.json"));
  for (const char* k : {"scenario", "library_version", "seed", "threads", "parameters", "sweep",
                        "files", "warnings", "wall_clock_seconds"})
    CHECK(j.contains(k));
  for (const auto& p : parameter_table()) CHECK(j["parameters"].contains(p.qualified()));
  for (const auto& p : choice_table()) CHECK(j["parameters"].contains(p.qualified()));
  CHECK(j["parameters"]["gas.buffer_pressure"]["explicit"] == true);
  CHECK(j["parameters"]["gas.buffer_pressure"]["si"] == 2e6);
  CHECK(j["parameters"]["gas.temperature"]["explicit"] == false);
  REQUIRE(j["files"].size() == m.files.size());
  for (const auto& f : j["files"]) {
    const std::string data = slurp(out / f["path"].get<std::string>());
    CHECK(f["sha256"] == sha256_hex(data));
    CHECK(f["bytes"] == data.size());
  }
}

TEST_CASE("sha256 and number formatting") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e-20) == "1e-20");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
  CsvTable t({"a", "b"});
  t.add_row({1.5, std::int64_t{2}});
  CHECK(t.str() == "a,b\n1.5,2\n");
  CHECK_THROWS(t.add_row({1.0}));
}

TEST_CASE("command-line exit codes") {
  const fs::path out = scratch("tool");
  CHECK(run_tool("list") == 0);
  CHECK(run_tool("--version") == 0);
  CHECK(run_tool("frobnicate") == 2);
  CHECK(run_tool("run " + (out / "missing.ini").string()) == 2);
  std::ofstream(out / "bad.ini") << "scenario = fig4a\n[gas]\nbuffer_pressure_K = 1\n";
  CHECK(run_tool("run " + (out / "bad.ini").string()) == 2);
  std::ofstream(out / "good.ini") << "scenario = fig4a\n[scan]\npoints = 21\n";
  CHECK(run_tool("run " + (out / "good.ini").string() + " --out " + (out / "run").string()) == 0);
  CHECK(fs::exists(out / "run" / "manifest.json"));
  CHECK(run_tool("run " + (out / "good.ini").string() + " --out " + (out / "run2").string() +
                 " --override gas.buffer_pressure_bar=-3") == 2);
}

}
