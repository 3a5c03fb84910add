#include "omora/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "omora/channel.hpp"

namespace omora {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class Objective>
double grid_argmin(const Interval& iv, int points, Objective&& obj) {
  if (points < 2) throw std::invalid_argument("grid oracle needs at least 2 points");
  double best_x = iv.lo;
  double best_v = obj(iv.lo);
  const double span = iv.hi - iv.lo;
  for (int i = 1; i < points; ++i) {
    const double x = i == points - 1 ? iv.hi : iv.lo + span * static_cast<double>(i) / (points - 1);
    const double v = obj(x);
    if (v < best_v) {
      best_v = v;
      best_x = x;
    }
  }
  return best_x;
}

}  // namespace

double frequency_objective(double freq, const AllocContext& ctx, const NetworkConfig& cfg) {
  return cfg.lyapunov_V * cfg.energy_coeff * freq * freq * freq -
         ctx.queue * freq * cfg.slot_length / cfg.comp_intensity;
}

Interval frequency_interval(const AllocContext& ctx, const NetworkConfig& cfg) {
  return {std::max((cfg.rate_min - ctx.other_rate) * cfg.comp_intensity, 0.0), cfg.f_max};
}

AllocResult optimal_frequency(const AllocContext& ctx, const NetworkConfig& cfg) {
  const Interval iv = frequency_interval(ctx, cfg);
  if (iv.empty()) return {cfg.f_max, false};

  double stationary = 0.0;
  if (ctx.queue > 0.0) {
    const double denom = 3.0 * cfg.lyapunov_V * cfg.energy_coeff * cfg.comp_intensity;
    stationary = denom > 0.0 ? std::sqrt(ctx.queue * cfg.slot_length / denom) : kInf;
  }
  return {std::max(iv.lo, std::min(stationary, cfg.f_max)), true};
}

double power_objective(double power, const AllocContext& ctx, const NetworkConfig& cfg) {
  const double served = offload_rate(ctx.gain, power, cfg) * cfg.slot_length;
  return ctx.queue * (ctx.arrival - served) +
         cfg.lyapunov_V * (cfg.amp_coeff * power + cfg.circuit_power);
}

Interval power_interval(const AllocContext& ctx, const NetworkConfig& cfg) {
  const double exponent = (cfg.rate_min - ctx.other_rate) / cfg.bandwidth;
  double required = 0.0;
  if (exponent > 0.0) {
    required = ctx.gain > 0.0 ? std::expm1(exponent * std::numbers::ln2) * cfg.noise_plus_interference() / ctx.gain
                              : kInf;
  }
  return {required, cfg.p_max};
}

AllocResult optimal_power(const AllocContext& ctx, const NetworkConfig& cfg) {
  const Interval iv = power_interval(ctx, cfg);
  if (iv.empty()) return {cfg.p_max, false};

  double stationary = 0.0;
  if (ctx.queue > 0.0 && ctx.gain > 0.0) {
    const double denom = cfg.lyapunov_V * cfg.amp_coeff * std::numbers::ln2;
    stationary = denom > 0.0
                     ? ctx.queue * cfg.bandwidth * cfg.slot_length / denom - cfg.noise_plus_interference() / ctx.gain
                     : kInf;
  }
  return {std::max(iv.lo, std::min(stationary, cfg.p_max)), true};
}

double grid_oracle_frequency(const AllocContext& ctx, const NetworkConfig& cfg, int grid_points) {
  const Interval iv = frequency_interval(ctx, cfg);
  if (iv.empty()) return cfg.f_max;
  return grid_argmin(iv, grid_points, [&](double f) { return frequency_objective(f, ctx, cfg); });
}

double grid_oracle_power(const AllocContext& ctx, const NetworkConfig& cfg, int grid_points) {
  const Interval iv = power_interval(ctx, cfg);
  if (iv.empty()) return cfg.p_max;
  return grid_argmin(iv, grid_points, [&](double p) { return power_objective(p, ctx, cfg); });
}

}  // namespace omora
