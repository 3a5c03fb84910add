#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace omora {

/// Thrown when a configuration violates one of its invariants. The message
/// names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Physical and algorithmic constants of one network scenario.
///
/// Defaults reproduce the evaluation setting: 3 servers, 10 devices in a
/// 100 m x 100 m area, uniform task arrivals in [0.95, 1.5] Mbit per slot.
/// Constants the evaluation leaves open (slot length, per-server capacity,
/// circuit power, rate threshold, walking step) get engineering defaults.
struct NetworkConfig {
  int num_servers = 3;            // M
  int num_mids = 10;              // U
  double slot_length = 1.0;       // tau [s]
  double bandwidth = 1e6;         // omega [Hz]
  double noise_power = 1e-13;     // sigma^2 [W]
  double interference = 1e-10;    // chi [W]
  double pathloss_const = 1e-4;   // g0, linear (-40 dB)
  double pathloss_exp = 4.0;      // theta
  double ref_dist = 1.0;          // d0 [m]
  double energy_coeff = 1e-28;    // kappa_mob [W s^3 / cycle^3]
  double comp_intensity = 737.5;  // gamma [cycles/bit]
  double amp_coeff = 1.0;         // zeta
  double circuit_power = 0.0;     // p_r [W]
  double f_max = 2.15e9;          // [Hz]
  double p_max = 1.0;             // P_max^tx [W]
  double migration_unit = 0.1;    // epsilon
  double migration_weight = 0.1;  // phi
  double lyapunov_V = 1e10;       // V
  double rate_min = 1e5;          // R_th [bit/s]
  int cap_max = 10;               // N_max, per server
  int horizon = 2000;             // T [slots]
  int warmup = 200;               // slots excluded from time averages
  double area_width = 100.0;      // [m]
  double area_height = 100.0;     // [m]
  double arrival_low = 0.95e6;    // [bit/slot]
  double arrival_high = 1.5e6;    // [bit/slot]
  double step_length = 1.0;       // [m/slot]
  std::uint64_t seed = 1;

  /// chi + sigma^2, the denominator of every SINR.
  [[nodiscard]] double noise_plus_interference() const { return interference + noise_power; }

  bool operator==(const NetworkConfig&) const = default;
};

/// Returns `cfg` unchanged if every invariant holds, otherwise throws
/// ConfigError naming the first failing field.
NetworkConfig validate_config(const NetworkConfig& cfg);

/// JSON text -> config. Every key is optional; absent keys keep their
/// defaults except `cap_max`, which defaults to `num_mids`. Unknown keys are
/// rejected. The result is validated.
NetworkConfig config_from_json(const std::string& text);

/// Config -> pretty-printed JSON carrying every field. Doubles are written
/// with round-trip precision, so config_from_json(config_to_json(c)) == c.
std::string config_to_json(const NetworkConfig& cfg);

NetworkConfig load_config(const std::filesystem::path& path);
void save_config(const NetworkConfig& cfg, const std::filesystem::path& path);

/// FNV-1a 64 of the canonical (compact, sorted-key) JSON form, hex encoded.
std::string config_hash(const NetworkConfig& cfg);

}  // namespace omora
