#pragma once

#include <span>
#include <cstdint>

#include "omora/config.hpp"

namespace omora {

struct CostBreakdown {
  double local_power = 0.0;    // P_u^l
  double offload_power = 0.0;  // P_u^o
  double total_power = 0.0;    // P_u
  double migration = 0.0;      // c_u
  double service = 0.0;        // W_u
};

/// kappa * f^3 [W].
inline double local_power(double freq, double energy_coeff) { return energy_coeff * freq * freq * freq; }

/// zeta * p_tx + p_r [W].
inline double offload_power(double tx_power, double amp_coeff, double circuit_power) {
  return amp_coeff * tx_power + circuit_power;
}

/// Handover cost between two association rows:
///   sum_m (eps/2) [(1 - x_prev) x_cur + (1 - x_cur) x_prev],
/// i.e. eps when the server changed and 0 otherwise. An all-zero `prev`
/// (no previous slot) costs nothing. Throws std::invalid_argument for rows
/// that are not one-hot.
double migration_cost(std::span<const std::uint8_t> prev, std::span<const std::uint8_t> cur, double eps);

/// W = P + phi c.
inline double service_cost(double power, double migration, double phi) { return power + phi * migration; }

CostBreakdown cost_breakdown(double freq, double tx_power, double migration, const NetworkConfig& cfg);

}  // namespace omora
