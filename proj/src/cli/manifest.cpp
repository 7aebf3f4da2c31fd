#include <openssl/evp.h>

#include <json.hpp>
#include <stdexcept>

#include "exciplex/cli/scenarios.hpp"

#ifndef EXCIPLEX_VERSION
#define EXCIPLEX_VERSION "unknown"
#endif

namespace exciplex::cli {

std::string library_version() { return EXCIPLEX_VERSION; }

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::string RunManifest::to_json() const {
  using nlohmann::ordered_json;
  ordered_json j;
  j["scenario"] = scenario;
  j["library_version"] = library_version;
  j["preset"] = config.preset;
  j["seed"] = seed;
  j["threads"] = threads;
  j["config_source"] = config_source;
  j["wall_clock_seconds"] = wall_clock_seconds;

  ordered_json params = ordered_json::object();
  for (const auto& p : parameter_table()) {
    const double si = config.get(p.qualified());
    ordered_json e;
    e["value"] = display_value(p, si);
    e["unit"] = p.display_unit;
    e["si"] = si;
    e["explicit"] = config.values.count(p.qualified()) > 0;
    params[p.qualified()] = e;
  }
  for (const auto& c : choice_table()) {
    ordered_json e;
    e["value"] = config.choice(c.qualified());
    e["explicit"] = config.choices.count(c.qualified()) > 0;
    params[c.qualified()] = e;
  }
  j["parameters"] = params;

  if (auto sweep = resolve_sweep(config)) {
    ordered_json s;
    s["parameter"] = sweep->parameter;
    s["unit"] = sweep->unit;
    s["values_si"] = sweep->values;
    j["sweep"] = s;
  } else {
    j["sweep"] = nullptr;
  }

  ordered_json files_json = ordered_json::array();
  for (const auto& f : files)
    files_json.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  j["files"] = files_json;
  j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

}  // namespace exciplex::cli
