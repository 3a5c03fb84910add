#pragma once

#include "omora/config.hpp"

namespace omora {

/// Inputs of the per-MID frequency and power sub-problems with the
/// association held fixed.
struct AllocContext {
  double queue = 0.0;       // Q_u [bit]
  double arrival = 0.0;     // A_u [bit]
  double gain = 0.0;        // H to the associated server
  double other_rate = 0.0;  // r_u^o for the frequency step, r_u^l for the power step [bit/s]
};

struct AllocResult {
  double value = 0.0;
  /// False when the rate floor cannot be met inside the box; `value` is then
  /// the box maximum.
  bool feasible = true;
};

/// Feasible interval [lo, hi] of one sub-problem; lo > hi means empty.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  [[nodiscard]] bool empty() const { return lo > hi; }
};

// --- CPU frequency ---------------------------------------------------------
// minimise V kappa f^3 - Q f tau / gamma   s.t.  f / gamma >= R_th - r_o,
//                                                0 <= f <= f_max

double frequency_objective(double freq, const AllocContext& ctx, const NetworkConfig& cfg);
Interval frequency_interval(const AllocContext& ctx, const NetworkConfig& cfg);

/// f = max{(R_th - r_o) gamma, 0, min{sqrt(Q tau / (3 V kappa gamma)), f_max}}.
AllocResult optimal_frequency(const AllocContext& ctx, const NetworkConfig& cfg);

// --- transmit power --------------------------------------------------------
// minimise Q (A - omega tau log2(1 + p H / N)) + V (zeta p + p_r)
//   s.t. p >= (2^((R_th - r_l)/omega) - 1) N / H,  0 <= p <= P_max

double power_objective(double power, const AllocContext& ctx, const NetworkConfig& cfg);
Interval power_interval(const AllocContext& ctx, const NetworkConfig& cfg);

/// Stationary point of the power objective, Q omega tau / (V zeta ln 2) - N / H,
/// clamped into the feasible interval.
AllocResult optimal_power(const AllocContext& ctx, const NetworkConfig& cfg);

// --- brute-force oracles ---------------------------------------------------

/// Minimiser of the objective over `grid_points` evenly spaced points of the
/// feasible interval (end points included). Returns the box maximum when the
/// interval is empty.
double grid_oracle_frequency(const AllocContext& ctx, const NetworkConfig& cfg, int grid_points);
double grid_oracle_power(const AllocContext& ctx, const NetworkConfig& cfg, int grid_points);

}  // namespace omora
