#include "omora/config.hpp"

#include <filesystem>

#include <gtest/gtest.h>

#include "omora/model.hpp"

namespace omora {
namespace {

TEST(ValidateConfig, DefaultsAccepted) {
  const NetworkConfig cfg;
  EXPECT_EQ(cfg.num_servers, 3);
  EXPECT_EQ(cfg.num_mids, 10);
  EXPECT_DOUBLE_EQ(cfg.energy_coeff, 1e-28);
  EXPECT_DOUBLE_EQ(cfg.bandwidth, 1e6);
  EXPECT_DOUBLE_EQ(cfg.noise_power, 1e-13);
  EXPECT_DOUBLE_EQ(cfg.interference, 1e-10);
  EXPECT_DOUBLE_EQ(cfg.p_max, 1.0);
  EXPECT_DOUBLE_EQ(cfg.f_max, 2.15e9);
  EXPECT_DOUBLE_EQ(cfg.comp_intensity, 737.5);
  EXPECT_DOUBLE_EQ(cfg.amp_coeff, 1.0);
  EXPECT_DOUBLE_EQ(cfg.migration_unit, 0.1);
  EXPECT_DOUBLE_EQ(cfg.migration_weight, 0.1);
  EXPECT_NO_THROW(validate_config(cfg));
  EXPECT_EQ(validate_config(cfg), cfg);
}

TEST(ValidateConfig, CapacityInfeasibleRejected) {
  NetworkConfig cfg;
  cfg.cap_max = 1;
  try {
    validate_config(cfg);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("cap_max"), std::string::npos);
  }
}

TEST(ValidateConfig, ZeroSlotLengthRejected) {
  NetworkConfig cfg;
  cfg.slot_length = 0.0;
  try {
    validate_config(cfg);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("slot_length"), std::string::npos);
  }
}

TEST(ValidateConfig, NonNegativeFieldsMayBeZero) {
  NetworkConfig cfg;
  cfg.interference = 0.0;
  cfg.circuit_power = 0.0;
  cfg.migration_unit = 0.0;
  cfg.migration_weight = 0.0;
  cfg.rate_min = 0.0;
  cfg.lyapunov_V = 0.0;
  EXPECT_NO_THROW(validate_config(cfg));
}

TEST(ValidateConfig, ArrivalRangeOrdered) {
  NetworkConfig cfg;
  cfg.arrival_low = 2e6;
  EXPECT_THROW(validate_config(cfg), ConfigError);
}

TEST(ValidateConfig, NegativeValuesRejected) {
  NetworkConfig a;
  a.migration_unit = -0.1;
  EXPECT_THROW(validate_config(a), ConfigError);
  NetworkConfig b;
  b.rate_min = -1.0;
  EXPECT_THROW(validate_config(b), ConfigError);
  NetworkConfig c;
  c.num_mids = 0;
  EXPECT_THROW(validate_config(c), ConfigError);
}

TEST(ConfigJson, RoundTripBitExact) {
  NetworkConfig cfg;
  cfg.lyapunov_V = 0.1 + 0.2;
  cfg.rate_min = 1.0 / 3.0;
  cfg.seed = 0xfedcba9876543210ULL;
  cfg.area_width = 123.456789012345678;
  const NetworkConfig back = config_from_json(config_to_json(cfg));
  EXPECT_EQ(back, cfg);
}

TEST(ConfigJson, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "omora_config_test.json";
  NetworkConfig cfg;
  cfg.horizon = 17;
  cfg.migration_unit = 0.7;
  save_config(cfg, path);
  EXPECT_EQ(load_config(path), cfg);
  std::filesystem::remove(path);
}

TEST(ConfigJson, MissingKeysKeepDefaults) {
  const NetworkConfig cfg = config_from_json(R"({"horizon": 5})");
  NetworkConfig expected;
  expected.horizon = 5;
  EXPECT_EQ(cfg, expected);
}

TEST(ConfigJson, CapMaxFollowsNumMids) {
  const NetworkConfig cfg = config_from_json(R"({"num_mids": 4})");
  EXPECT_EQ(cfg.cap_max, 4);
  const NetworkConfig explicit_cap = config_from_json(R"({"num_mids": 4, "cap_max": 2})");
  EXPECT_EQ(explicit_cap.cap_max, 2);
}

TEST(ConfigJson, UnknownKeyRejected) {
  EXPECT_THROW(config_from_json(R"({"horizn": 5})"), ConfigError);
}

TEST(ConfigJson, WrongTypesRejected) {
  EXPECT_THROW(config_from_json(R"({"horizon": "5"})"), ConfigError);
  EXPECT_THROW(config_from_json(R"({"horizon": 2.5})"), ConfigError);
  EXPECT_THROW(config_from_json(R"({"seed": -1})"), ConfigError);
  EXPECT_THROW(config_from_json("[1, 2]"), ConfigError);
  EXPECT_THROW(config_from_json("{not json"), ConfigError);
}

TEST(ConfigJson, InvalidValuesRejectedOnLoad) {
  EXPECT_THROW(config_from_json(R"({"slot_length": 0})"), ConfigError);
}

TEST(ConfigHash, StableAndSensitive) {
  NetworkConfig a;
  NetworkConfig b;
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  b.lyapunov_V = 1e9;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(ValidateDecision, AcceptsFeasible) {
  NetworkConfig cfg;
  cfg.num_mids = 3;
  cfg.num_servers = 2;
  cfg.cap_max = 2;
  const std::vector<int> servers{0, 1, 0};
  Decision d{AssocMatrix::from_servers(servers, 2), {0.0, 0.5, 1.0}, {0.0, 1e9, 2.15e9}};
  EXPECT_NO_THROW(validate_decision(d, cfg));
}

TEST(ValidateDecision, RejectsEveryConstraintViolation) {
  NetworkConfig cfg;
  cfg.num_mids = 3;
  cfg.num_servers = 2;
  cfg.cap_max = 2;
  const std::vector<int> servers{0, 1, 0};
  const Decision ok{AssocMatrix::from_servers(servers, 2), {0.5, 0.5, 0.5}, {1e9, 1e9, 1e9}};

  Decision two_servers = ok;
  two_servers.assoc.set(0, 1, true);
  EXPECT_THROW(validate_decision(two_servers, cfg), std::invalid_argument);

  Decision no_server = ok;
  no_server.assoc.set(1, 1, false);
  EXPECT_THROW(validate_decision(no_server, cfg), std::invalid_argument);

  Decision over_cap = ok;
  over_cap.assoc.assign(1, 0);
  EXPECT_THROW(validate_decision(over_cap, cfg), std::invalid_argument);

  Decision hot = ok;
  hot.tx_power[2] = 1.5;
  EXPECT_THROW(validate_decision(hot, cfg), std::invalid_argument);

  Decision fast = ok;
  fast.cpu_freq[0] = 3e9;
  EXPECT_THROW(validate_decision(fast, cfg), std::invalid_argument);

  Decision negative = ok;
  negative.tx_power[0] = -1e-3;
  EXPECT_THROW(validate_decision(negative, cfg), std::invalid_argument);
}

TEST(AssocMatrix, Accessors) {
  const std::vector<int> servers{2, 0, 2};
  const AssocMatrix x = AssocMatrix::from_servers(servers, 3);
  EXPECT_TRUE(x.is_one_hot());
  EXPECT_FALSE(x.is_cold());
  EXPECT_EQ(x.column_sum(2), 2);
  EXPECT_EQ(x.column_sum(1), 0);
  EXPECT_EQ(*x.server_of(1), 0);
  EXPECT_TRUE(AssocMatrix(3, 3).is_cold());
  EXPECT_FALSE(AssocMatrix(3, 3).server_of(0).has_value());
}

}  // namespace
}  // namespace omora
