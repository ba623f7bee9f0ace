#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <cstring>
#include <sstream>

#include "qdrep/mcsim.hpp"
#include "qdrep/params.hpp"
#include "qdrep/rates.hpp"

namespace qdrep {
namespace {

ProtocolConfig config(int n, double p0, double ps, std::uint64_t trials, std::uint64_t seed = 7) {
  ProtocolConfig c;
  c.nesting_level = n;
  c.p0 = p0;
  c.p_swap = ps;
  c.slot_time = 1.0;
  c.trials = trials;
  c.seed = seed;
  return c;
}

bool identical(const std::vector<TrialRecord>& a, const std::vector<TrialRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::memcmp(&a[i].total_time, &b[i].total_time, sizeof(double)) != 0) return false;
    if (std::memcmp(&a[i].max_storage_time, &b[i].max_storage_time, sizeof(double)) != 0) return false;
    if (a[i].attempts != b[i].attempts || a[i].swap_failures != b[i].swap_failures) return false;
  }
  return true;
}

TEST(McSim, SingleLinkIsGeometric) {
  const auto s = simulate_chain(config(0, 0.1, 1.0, 100000));
  EXPECT_LT(std::abs(s.mean - 10.0), 3.0 * s.stderr_mean);
  // Variance of a geometric count is (1 - p) / p^2.
  EXPECT_NEAR(s.variance, 90.0, 3.0);
  EXPECT_DOUBLE_EQ(s.stderr_mean, std::sqrt(s.variance / s.trials));
  EXPECT_EQ(s.success_fraction, 1.0);
}

TEST(McSim, TwoLinksMatchMaxOfGeometrics) {
  const double p0 = 0.01;
  const double ps = 0.5;
  const double exact = (2.0 / p0 - 1.0 / (p0 * (2.0 - p0))) / ps;
  EXPECT_NEAR(exact, 299.497, 1e-3);
  const auto s = simulate_chain(config(1, p0, ps, 100000));
  EXPECT_LT(std::abs(s.mean - exact), 3.0 * s.stderr_mean);
}

TEST(McSim, RatioToFormulaApproachesOneForSmallP0) {
  // For n = 1 the exact mean over the (3/2) approximation is (2 - 1/(2 - p0)) / 1.5.
  double prev_gap = 1.0;
  for (double p0 : {0.1, 0.01, 0.001}) {
    const double ratio = (2.0 - 1.0 / (2.0 - p0)) / 1.5;
    const auto s = simulate_chain(config(1, p0, 1.0, 100000, 11));
    const auto rep = compare_with_analytic(s, 1.5 / p0, 0.0);
    EXPECT_NEAR(rep.ratio, ratio, 4.0 * s.stderr_mean / (1.5 / p0));
    const double gap = std::abs(ratio - 1.0);
    EXPECT_LT(gap, prev_gap);
    prev_gap = gap;
  }
}

TEST(McSim, NestedChainWithinEnvelope) {
  auto params = default_parameters();
  ProtocolConfig c = protocol_from_params(params);
  c.trials = 50000;
  c.seed = 3;
  ASSERT_LE(c.p0, 0.01);
  const auto rep = compare_with_analytic(c, mean_time_parallel(params), 0.15);
  EXPECT_TRUE(rep.pass) << rep.ratio;
  EXPECT_GT(rep.ratio, 0.85);
  EXPECT_LT(rep.ratio, 1.15);
  EXPECT_LE(rep.ci_low, rep.mc.mean);
  EXPECT_GE(rep.ci_high, rep.mc.mean);
}

TEST(McSim, DeterministicAcrossWorkerCounts) {
  ProtocolConfig c = config(3, 0.02, 0.6, 5000, 99);
  c.workers = 1;
  const auto a = simulate_trials(c);
  c.workers = 3;
  const auto b = simulate_trials(c);
  c.workers = 8;
  const auto d = simulate_trials(c);
  EXPECT_TRUE(identical(a, b));
  EXPECT_TRUE(identical(a, d));
  const auto single = simulate_trial(c, 1234);
  EXPECT_EQ(single.total_time, a[1234].total_time);

  c.seed = 100;
  EXPECT_FALSE(identical(a, simulate_trials(c)));
}

TEST(McSim, MeanMonotoneInSuccessProbabilities) {
  double prev = INFINITY;
  for (double p0 : {0.02, 0.05, 0.1, 0.3}) {
    const double m = simulate_chain(config(2, p0, 0.7, 20000, 5)).mean;
    EXPECT_LT(m, prev);
    prev = m;
  }
  prev = INFINITY;
  for (double ps : {0.3, 0.5, 0.8, 1.0}) {
    const double m = simulate_chain(config(2, 0.1, ps, 20000, 5)).mean;
    EXPECT_LT(m, prev);
    prev = m;
  }
}

TEST(McSim, RecordsAreConsistent) {
  const auto c = config(2, 0.2, 0.5, 2000);
  for (const auto& r : simulate_trials(c)) {
    EXPECT_GE(r.total_time, c.slot_time);
    EXPECT_GE(r.attempts, 4u);
    EXPECT_TRUE(r.success);
    EXPECT_LE(r.max_storage_time, r.total_time);
  }
}

TEST(McSim, SingleLinkNeverStores) {
  const auto h = storage_time_histogram(config(0, 0.3, 1.0, 1000), 4, 0.0);
  EXPECT_EQ(h.counts[0], 1000u);
  EXPECT_EQ(h.fraction_above_threshold, 0.0);
}

TEST(McSim, StorageDistributionMatchesEnumeration) {
  // n = 1, p_swap = 1: storage is |G1 - G2| slots. Enumerate the joint law.
  const double p = 0.5;
  std::vector<double> law(21, 0.0);
  for (int a = 1; a <= 60; ++a) {
    for (int b = 1; b <= 60; ++b) {
      const int k = std::abs(a - b);
      if (k < 21) law[k] += p * std::pow(1 - p, a - 1) * p * std::pow(1 - p, b - 1);
    }
  }
  const std::uint64_t trials = 200000;
  const auto records = simulate_trials(config(1, p, 1.0, trials, 21));
  std::vector<double> freq(21, 0.0);
  for (const auto& r : records) {
    const auto k = static_cast<std::size_t>(std::llround(r.max_storage_time));
    ASSERT_DOUBLE_EQ(r.max_storage_time, static_cast<double>(k));
    if (k < freq.size()) freq[k] += 1.0 / trials;
  }
  for (std::size_t k = 0; k < 8; ++k) {
    const double sd = std::sqrt(law[k] * (1 - law[k]) / trials);
    EXPECT_NEAR(freq[k], law[k], 4.0 * sd + 1e-6) << k;
  }
}

TEST(McSim, MemoryCutoffLowersSuccessAndRaisesCost) {
  ProtocolConfig c = config(2, 0.05, 0.8, 20000, 8);
  const auto free = simulate_chain(c);
  const auto records = simulate_trials(c);
  std::vector<double> storage;
  for (const auto& r : records) storage.push_back(r.max_storage_time);
  std::sort(storage.begin(), storage.end());
  c.memory_cutoff = storage[storage.size() / 2] * 0.9;
  const auto cut = simulate_chain(c);
  EXPECT_EQ(free.success_fraction, 1.0);
  EXPECT_LT(cut.success_fraction, 1.0);
  EXPECT_GT(cut.mean_time_per_success, free.mean_time_per_success);
}

TEST(McSim, HistogramEdgesAndCsv) {
  const auto records = simulate_trials(config(1, 0.3, 0.9, 50));
  const auto h = storage_time_histogram(records, 5, 2.0);
  EXPECT_EQ(h.edges.size(), 6u);
  std::uint64_t total = 0;
  for (auto c : h.counts) total += c;
  EXPECT_EQ(total, 50u);

  std::ostringstream os;
  write_trials_csv(os, records);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "trial, total_time_s, swap_failures, max_storage_s");
  std::getline(in, line);
  EXPECT_EQ(line.rfind("0, ", 0), 0u);
  EXPECT_NE(line.find("e+"), std::string::npos);
}

TEST(McSim, ConfigValidation) {
  EXPECT_THROW(simulate_chain(config(1, 0.0, 0.5, 10)), std::invalid_argument);
  EXPECT_THROW(simulate_chain(config(1, 0.5, 1.5, 10)), std::invalid_argument);
  EXPECT_THROW(simulate_chain(config(-1, 0.5, 0.5, 10)), std::invalid_argument);
  EXPECT_THROW(simulate_chain(config(1, 0.5, 0.5, 0)), std::invalid_argument);
}

TEST(McSim, ProtocolFromParameters) {
  const auto params = default_parameters();
  const auto c = protocol_from_params(params);
  EXPECT_EQ(c.nesting_level, 3);
  EXPECT_NEAR(c.slot_time, 125e3 / 2e8 + 0.2e-6, 1e-15);
  EXPECT_DOUBLE_EQ(c.p_swap, swap_success_probability(params.link));
  EXPECT_TRUE(std::isinf(c.memory_cutoff));
}

}  // namespace
}  // namespace qdrep
