#include "omora/model.hpp"

#include <cmath>
#include <string>

namespace omora {

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

AssocMatrix AssocMatrix::from_servers(std::span<const int> server_of_mid, int servers) {
  AssocMatrix x(static_cast<int>(server_of_mid.size()), servers);
  for (int u = 0; u < x.mids(); ++u) {
    const int m = server_of_mid[u];
    if (m < 0 || m >= servers) throw std::out_of_range("server index out of range");
    x.set(u, m, true);
  }
  return x;
}

void AssocMatrix::assign(int u, int m) {
  for (int k = 0; k < servers_; ++k) set(u, k, k == m);
}

int AssocMatrix::row_sum(int u) const {
  int s = 0;
  for (int m = 0; m < servers_; ++m) s += at(u, m) ? 1 : 0;
  return s;
}

int AssocMatrix::column_sum(int m) const {
  int s = 0;
  for (int u = 0; u < mids_; ++u) s += at(u, m) ? 1 : 0;
  return s;
}

std::optional<int> AssocMatrix::server_of(int u) const {
  std::optional<int> found;
  for (int m = 0; m < servers_; ++m) {
    if (!at(u, m)) continue;
    if (found) return std::nullopt;
    found = m;
  }
  return found;
}

bool AssocMatrix::is_cold() const {
  for (auto b : bits_) {
    if (b != 0) return false;
  }
  return true;
}

bool AssocMatrix::is_one_hot() const {
  for (int u = 0; u < mids_; ++u) {
    if (row_sum(u) != 1) return false;
  }
  return true;
}

void validate_decision(const Decision& d, const NetworkConfig& cfg) {
  const int U = cfg.num_mids;
  const int M = cfg.num_servers;
  if (d.assoc.mids() != U || d.assoc.servers() != M) {
    throw std::invalid_argument("decision: association matrix has wrong shape");
  }
  if (static_cast<int>(d.tx_power.size()) != U || static_cast<int>(d.cpu_freq.size()) != U) {
    throw std::invalid_argument("decision: power/frequency vectors have wrong length");
  }
  for (int u = 0; u < U; ++u) {
    if (d.assoc.row_sum(u) != 1) {
      throw std::invalid_argument("decision: MID " + std::to_string(u) + " is not associated with exactly one server");
    }
    if (!(d.tx_power[u] >= 0.0 && d.tx_power[u] <= cfg.p_max)) {
      throw std::invalid_argument("decision: tx power of MID " + std::to_string(u) + " outside [0, p_max]");
    }
    if (!(d.cpu_freq[u] >= 0.0 && d.cpu_freq[u] <= cfg.f_max)) {
      throw std::invalid_argument("decision: cpu frequency of MID " + std::to_string(u) + " outside [0, f_max]");
    }
  }
  for (int m = 0; m < M; ++m) {
    if (d.assoc.column_sum(m) > cfg.cap_max) {
      throw std::invalid_argument("decision: server " + std::to_string(m) + " exceeds cap_max");
    }
  }
}

}  // namespace omora
