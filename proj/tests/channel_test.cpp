#include "omora/channel.hpp"

#include <cmath>

#include <gtest/gtest.h>

namespace omora {
namespace {

TEST(StepMobility, ZeroStepKeepsPositions) {
  RngStream s = rng_stream(1, "mobility");
  const std::vector<Point> p{{10, 20}, {0, 0}, {100, 100}};
  EXPECT_EQ(step_mobility(p, 0.0, {100, 100}, s), p);
}

TEST(StepMobility, ReflectsAtBoundary) {
  RngStream s = rng_stream(3, "mobility");
  const Area area{100, 100};
  for (int i = 0; i < 1000; ++i) {
    const std::vector<Point> corner{{0, 0}, {100, 0}, {0, 100}, {100, 100}, {0.2, 99.9}};
    for (const Point& q : step_mobility(corner, 1.0, area, s)) {
      EXPECT_GE(q.x, 0.0);
      EXPECT_LE(q.x, 100.0);
      EXPECT_GE(q.y, 0.0);
      EXPECT_LE(q.y, 100.0);
    }
  }
}

TEST(StepMobility, ReflectionPreservesStepInsideArea) {
  RngStream s = rng_stream(5, "mobility");
  const std::vector<Point> p{{50, 50}};
  const Point q = step_mobility(p, 1.0, {100, 100}, s)[0];
  EXPECT_NEAR(distance(p[0], q), 1.0, 1e-12);
}

TEST(StepMobility, LongWalkStaysInside) {
  RngStream s = rng_stream(11, "mobility");
  RngStream place = rng_stream(11, "placement");
  const Area area{100, 100};
  std::vector<Point> p = initial_positions(10, area, place);
  for (int t = 0; t < 10000; ++t) {
    p = step_mobility(p, 1.0, area, s);
    for (const Point& q : p) {
      ASSERT_GE(q.x, 0.0);
      ASSERT_LE(q.x, 100.0);
      ASSERT_GE(q.y, 0.0);
      ASSERT_LE(q.y, 100.0);
    }
  }
}

TEST(StepMobility, DiffusiveGrowth) {
  // Unbounded walk: mean squared displacement after t unit steps is t.
  RngStream s = rng_stream(13, "mobility");
  const Area area{1e7, 1e7};
  const int walkers = 2000;
  std::vector<Point> start(walkers, Point{5e6, 5e6});
  std::vector<Point> p = start;
  for (int t = 1; t <= 1600; ++t) {
    p = step_mobility(p, 1.0, area, s);
    if (t == 100 || t == 400 || t == 1600) {
      double msd = 0.0;
      for (int i = 0; i < walkers; ++i) msd += std::pow(distance(p[i], start[i]), 2);
      msd /= walkers;
      EXPECT_NEAR(msd / t, 1.0, 0.1) << "t=" << t;
    }
  }
}

TEST(DrawFading, UnitMeanAndTail) {
  RngStream s = rng_stream(17, "fading");
  const Eigen::MatrixXd h = draw_fading(1000, 1000, s);
  EXPECT_GE(h.minCoeff(), 0.0);
  EXPECT_NEAR(h.mean(), 1.0, 0.01);
  const double tail = (h.array() > 1.0).cast<double>().mean();
  EXPECT_NEAR(tail, std::exp(-1.0), 0.01);
}

TEST(DrawFading, ReproduciblePerSeed) {
  RngStream a = rng_stream(19, "fading");
  RngStream b = rng_stream(19, "fading");
  EXPECT_EQ(draw_fading(10, 3, a), draw_fading(10, 3, b));
}

TEST(ChannelGain, ReferenceDistance) {
  const NetworkConfig cfg;
  EXPECT_DOUBLE_EQ(channel_gain(1.0, 1.0, cfg), 1e-4);
}

TEST(ChannelGain, DecadeScaling) {
  const NetworkConfig cfg;
  EXPECT_NEAR(channel_gain(1.0, 10.0, cfg), 1e-8, 1e-22);
}

TEST(ChannelGain, DirectEvaluation) {
  const NetworkConfig cfg;
  EXPECT_NEAR(channel_gain(2.5, 50.0, cfg), 4e-11, 1e-24);
}

TEST(ChannelGain, ClampsBelowReferenceDistance) {
  const NetworkConfig cfg;
  EXPECT_DOUBLE_EQ(channel_gain(1.0, 0.0, cfg), channel_gain(1.0, cfg.ref_dist, cfg));
  EXPECT_DOUBLE_EQ(channel_gain(1.0, 0.5, cfg), 1e-4);
}

TEST(ChannelGain, DecreasingInDistance) {
  const NetworkConfig cfg;
  double prev = channel_gain(1.3, 1.0, cfg);
  for (double d = 1.5; d < 200.0; d += 0.5) {
    const double g = channel_gain(1.3, d, cfg);
    EXPECT_LT(g, prev);
    prev = g;
  }
}

TEST(OffloadRate, Examples) {
  NetworkConfig cfg;
  EXPECT_EQ(offload_rate(1e-8, 0.0, cfg), 0.0);
  const double unit_snr_gain = cfg.noise_plus_interference();
  EXPECT_DOUBLE_EQ(offload_rate(unit_snr_gain, 1.0, cfg), 1e6);
  EXPECT_NEAR(offload_rate(1.6e-11, 1.0, cfg), 213925.99802957286, 1e-6);
}

TEST(OffloadRate, IncreasingAndConcaveInPower) {
  const NetworkConfig cfg;
  const double gain = 3e-9;
  const double h = 1e-3;
  for (double p = h; p <= 1.0 - h; p += 0.01) {
    const double lo = offload_rate(gain, p - h, cfg);
    const double mid = offload_rate(gain, p, cfg);
    const double hi = offload_rate(gain, p + h, cfg);
    EXPECT_LT(lo, mid);
    EXPECT_LT(mid, hi);
    EXPECT_LT(hi - 2.0 * mid + lo, 0.0);
  }
}

TEST(LocalRate, Examples) {
  EXPECT_EQ(local_rate(0.0, 737.5), 0.0);
  EXPECT_NEAR(local_rate(2.15e9, 737.5), 2915254.2372881356, 1e-6);
  EXPECT_DOUBLE_EQ(local_rate(737.5, 737.5), 1.0);
}

TEST(ServerSites, TriangleInsideArea) {
  const Area area{100, 100};
  const auto sites = server_sites(3, area);
  ASSERT_EQ(sites.size(), 3u);
  const double side = distance(sites[0], sites[1]);
  EXPECT_NEAR(distance(sites[1], sites[2]), side, 1e-9);
  EXPECT_NEAR(distance(sites[2], sites[0]), side, 1e-9);
  for (const Point& p : sites) {
    EXPECT_NEAR(distance(p, {50, 50}), 30.0, 1e-9);
  }
  EXPECT_EQ(server_sites(1, area)[0], (Point{50, 50}));
}

TEST(ChannelGains, MatchesPairwiseFormula) {
  const NetworkConfig cfg;
  SlotState st;
  st.positions = {{0, 0}, {10, 0}};
  st.server_positions = {{0, 10}, {20, 0}};
  st.fading.resize(2, 2);
  st.fading << 1.0, 2.0, 0.5, 1.5;
  const Eigen::MatrixXd H = channel_gains(st, cfg);
  EXPECT_DOUBLE_EQ(H(0, 0), channel_gain(1.0, 10.0, cfg));
  EXPECT_DOUBLE_EQ(H(0, 1), channel_gain(2.0, 20.0, cfg));
  EXPECT_DOUBLE_EQ(H(1, 0), channel_gain(0.5, std::hypot(10.0, 10.0), cfg));
  EXPECT_DOUBLE_EQ(H(1, 1), channel_gain(1.5, 10.0, cfg));
}

}  // namespace
}  // namespace omora
