#include "omora/config.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <variant>

#include "json.hpp"

namespace omora {
namespace {

using json = nlohmann::json;

using FieldPtr = std::variant<int NetworkConfig::*, double NetworkConfig::*,
                              std::uint64_t NetworkConfig::*>;

struct Field {
  std::string_view name;
  FieldPtr member;
};

// Canonical on-disk field order.
constexpr std::array<Field, 28> kFields{{
    {"num_servers", &NetworkConfig::num_servers},
    {"num_mids", &NetworkConfig::num_mids},
    {"slot_length", &NetworkConfig::slot_length},
    {"bandwidth", &NetworkConfig::bandwidth},
    {"noise_power", &NetworkConfig::noise_power},
    {"interference", &NetworkConfig::interference},
    {"pathloss_const", &NetworkConfig::pathloss_const},
    {"pathloss_exp", &NetworkConfig::pathloss_exp},
    {"ref_dist", &NetworkConfig::ref_dist},
    {"energy_coeff", &NetworkConfig::energy_coeff},
    {"comp_intensity", &NetworkConfig::comp_intensity},
    {"amp_coeff", &NetworkConfig::amp_coeff},
    {"circuit_power", &NetworkConfig::circuit_power},
    {"f_max", &NetworkConfig::f_max},
    {"p_max", &NetworkConfig::p_max},
    {"migration_unit", &NetworkConfig::migration_unit},
    {"migration_weight", &NetworkConfig::migration_weight},
    {"lyapunov_V", &NetworkConfig::lyapunov_V},
    {"rate_min", &NetworkConfig::rate_min},
    {"cap_max", &NetworkConfig::cap_max},
    {"horizon", &NetworkConfig::horizon},
    {"warmup", &NetworkConfig::warmup},
    {"area_width", &NetworkConfig::area_width},
    {"area_height", &NetworkConfig::area_height},
    {"arrival_low", &NetworkConfig::arrival_low},
    {"arrival_high", &NetworkConfig::arrival_high},
    {"step_length", &NetworkConfig::step_length},
    {"seed", &NetworkConfig::seed},
}};

[[noreturn]] void fail(std::string_view field, std::string_view what) {
  throw ConfigError("config field '" + std::string(field) + "': " + std::string(what));
}

void require_positive(std::string_view field, double v) {
  if (!std::isfinite(v) || !(v > 0.0)) fail(field, "must be finite and > 0");
}

void require_non_negative(std::string_view field, double v) {
  if (!std::isfinite(v) || v < 0.0) fail(field, "must be finite and >= 0");
}

json to_json_object(const NetworkConfig& cfg) {
  json j = json::object();
  for (const auto& f : kFields) {
    std::visit([&](auto member) { j[std::string(f.name)] = cfg.*member; }, f.member);
  }
  return j;
}

}  // namespace

NetworkConfig validate_config(const NetworkConfig& cfg) {
  if (cfg.num_servers < 1) fail("num_servers", "must be >= 1");
  if (cfg.num_mids < 1) fail("num_mids", "must be >= 1");
  if (cfg.num_servers + 1 > 16) fail("num_servers", "at most 15 servers are supported");
  require_positive("slot_length", cfg.slot_length);
  require_positive("bandwidth", cfg.bandwidth);
  require_positive("noise_power", cfg.noise_power);
  require_non_negative("interference", cfg.interference);
  require_positive("pathloss_const", cfg.pathloss_const);
  require_positive("pathloss_exp", cfg.pathloss_exp);
  require_positive("ref_dist", cfg.ref_dist);
  require_positive("energy_coeff", cfg.energy_coeff);
  require_positive("comp_intensity", cfg.comp_intensity);
  require_positive("amp_coeff", cfg.amp_coeff);
  require_non_negative("circuit_power", cfg.circuit_power);
  require_positive("f_max", cfg.f_max);
  require_positive("p_max", cfg.p_max);
  require_non_negative("migration_unit", cfg.migration_unit);
  require_non_negative("migration_weight", cfg.migration_weight);
  // V = 0 is the pure backlog-minimising controller; still well defined.
  require_non_negative("lyapunov_V", cfg.lyapunov_V);
  require_non_negative("rate_min", cfg.rate_min);
  if (cfg.cap_max < 1) fail("cap_max", "must be >= 1");
  if (static_cast<long long>(cfg.cap_max) * cfg.num_servers < cfg.num_mids) {
    fail("cap_max", "cap_max * num_servers (" +
                        std::to_string(static_cast<long long>(cfg.cap_max) * cfg.num_servers) +
                        ") < num_mids (" + std::to_string(cfg.num_mids) +
                        "): no feasible association");
  }
  if (cfg.horizon < 0) fail("horizon", "must be >= 0");
  if (cfg.warmup < 0) fail("warmup", "must be >= 0");
  require_positive("area_width", cfg.area_width);
  require_positive("area_height", cfg.area_height);
  require_non_negative("arrival_low", cfg.arrival_low);
  require_non_negative("arrival_high", cfg.arrival_high);
  if (cfg.arrival_low > cfg.arrival_high) fail("arrival_low", "must be <= arrival_high");
  require_non_negative("step_length", cfg.step_length);
  return cfg;
}

NetworkConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  NetworkConfig cfg;
  for (const auto& [key, value] : j.items()) {
    const Field* field = nullptr;
    for (const auto& f : kFields) {
      if (f.name == key) field = &f;
    }
    if (field == nullptr) fail(key, "unknown field");
    if (!value.is_number()) fail(key, "must be a number");
    std::visit(
        [&](auto member) {
          using T = std::remove_reference_t<decltype(cfg.*member)>;
          if constexpr (std::is_integral_v<T>) {
            if (!value.is_number_integer()) fail(key, "must be an integer");
            if constexpr (std::is_unsigned_v<T>) {
              if (value.is_number_unsigned()) {
                cfg.*member = value.get<std::uint64_t>();
              } else {
                const auto v = value.get<std::int64_t>();
                if (v < 0) fail(key, "must be >= 0");
                cfg.*member = static_cast<T>(v);
              }
            } else {
              cfg.*member = value.get<T>();
            }
          } else {
            cfg.*member = value.get<double>();
          }
        },
        field->member);
  }
  if (!j.contains("cap_max")) cfg.cap_max = cfg.num_mids;
  return validate_config(cfg);
}

std::string config_to_json(const NetworkConfig& cfg) {
  // ordered output keeps the documented field order
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& f : kFields) {
    std::visit([&](auto member) { j[std::string(f.name)] = cfg.*member; }, f.member);
  }
  return j.dump(2) + "\n";
}

NetworkConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

void save_config(const NetworkConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config file " + path.string());
  out << config_to_json(cfg);
}

std::string config_hash(const NetworkConfig& cfg) {
  const std::string canon = to_json_object(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace omora
