#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "omora/config.hpp"

namespace omora {

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

double distance(const Point& a, const Point& b);

/// Binary user-association matrix x_u^m, one row per MID.
///
/// Rows are either one-hot or, before the first decision, all zero.
class AssocMatrix {
 public:
  AssocMatrix() = default;
  AssocMatrix(int mids, int servers) : mids_(mids), servers_(servers), bits_(mids * servers, 0) {}

  /// One-hot matrix from a per-MID server index.
  static AssocMatrix from_servers(std::span<const int> server_of_mid, int servers);

  [[nodiscard]] int mids() const { return mids_; }
  [[nodiscard]] int servers() const { return servers_; }

  [[nodiscard]] bool at(int u, int m) const { return bits_[index(u, m)] != 0; }
  void set(int u, int m, bool on) { bits_[index(u, m)] = on ? 1 : 0; }
  /// Clears row u and sets entry (u, m).
  void assign(int u, int m);

  [[nodiscard]] int row_sum(int u) const;
  [[nodiscard]] int column_sum(int m) const;
  /// Server of MID u, or nullopt when the row is not one-hot.
  [[nodiscard]] std::optional<int> server_of(int u) const;
  /// True when every row is all-zero (no decision taken yet).
  [[nodiscard]] bool is_cold() const;
  /// True when every row sums to 1.
  [[nodiscard]] bool is_one_hot() const;

  std::span<const std::uint8_t> row(int u) const {
    return {bits_.data() + static_cast<std::size_t>(u) * servers_, static_cast<std::size_t>(servers_)};
  }

  bool operator==(const AssocMatrix&) const = default;

 private:
  [[nodiscard]] std::size_t index(int u, int m) const {
    return static_cast<std::size_t>(u) * servers_ + m;
  }
  int mids_ = 0;
  int servers_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Per-slot dynamic state observed by the controller at the start of slot t.
struct SlotState {
  int t = 1;
  std::vector<Point> positions;         // per MID [m]
  std::vector<Point> server_positions;  // per server [m]
  Eigen::MatrixXd fading;               // h_{u,m}, U x M
  std::vector<double> queues;           // Q_u(t) [bit]
  std::vector<double> arrivals;         // A_u(t) [bit]
  AssocMatrix prev_assoc;               // x_u^m(t-1)
};

/// One slot's control output O(t) = {x, p_tx, f}.
struct Decision {
  AssocMatrix assoc;
  std::vector<double> tx_power;  // [W]
  std::vector<double> cpu_freq;  // [Hz]
};

/// Per-MID outcome of one slot.
struct MidMetrics {
  double service_cost = 0.0;  // W_u = P_u + phi c_u
  double power = 0.0;         // P_u
  double migration = 0.0;     // c_u
  double total_rate = 0.0;    // R_u [bit/s]
  double executed = 0.0;      // D_u [bit]
  double local = 0.0;         // D_u^l [bit]
  double offloaded = 0.0;     // D_u^o [bit]
  double queue = 0.0;         // Q_u(t) [bit]
  double wasted = 0.0;        // D_u - min(D_u, Q_u) [bit]
  bool rate_violation = false;
};

struct SlotMetrics {
  int t = 0;
  std::vector<MidMetrics> mids;
};

/// Throws std::invalid_argument unless the decision satisfies the
/// association constraints (one server per MID, at most cap_max per server)
/// and the box constraints on power and frequency.
void validate_decision(const Decision& d, const NetworkConfig& cfg);

}  // namespace omora
