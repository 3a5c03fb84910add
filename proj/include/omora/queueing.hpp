#pragma once

#include <span>
#include <vector>

#include "omora/config.hpp"
#include "omora/random.hpp"

namespace omora {

/// Per-MID task arrivals for one slot, i.i.d. Uniform[arrival_low, arrival_high].
std::vector<double> draw_arrivals(const NetworkConfig& cfg, RngStream& stream);

/// Q' = max(Q - D, 0) + A.
inline double update_queue(double queue, double served, double arrived) {
  const double left = queue - served;
  return (left > 0.0 ? left : 0.0) + arrived;
}

std::vector<double> update_queues(std::span<const double> queues, std::span<const double> served,
                                  std::span<const double> arrived);

/// L(Q) = 1/2 sum Q_u^2.
double lyapunov(std::span<const double> queues);

/// Uniform per-slot bounds on served and arriving work.
struct WorkBounds {
  double served_max = 0.0;   // D_max [bit]
  double arrival_max = 0.0;  // A_max [bit]
};

/// D_max = omega tau log2(1 + g0 P_max / (chi + sigma^2)) + f_max tau / gamma,
/// using the gain at the reference distance; A_max = arrival_high.
WorkBounds work_bounds(const NetworkConfig& cfg);

/// C + sum_u Q_u (A_u - D_u) + V * total_cost, where
/// C = 1/2 sum_u (D_max^2 + A_max^2).
double drift_penalty_bound(std::span<const double> queues, std::span<const double> arrived,
                           std::span<const double> served, const WorkBounds& bounds,
                           double total_cost, double V);

}  // namespace omora
