#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "qdrep/params.hpp"
#include "qdrep/rates.hpp"

namespace qdrep {

struct ProtocolConfig {
  int nesting_level = 0;
  double p0 = 0.1;
  double p_swap = 1.0;
  double slot_time = 1.0;  ///< s, one generation attempt
  double swap_time = 0.0;  ///< s, added after every swap attempt
  double memory_cutoff = std::numeric_limits<double>::infinity();
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  unsigned workers = 0;  ///< 0 picks hardware concurrency; never changes results

  /// Throws std::invalid_argument when a field is outside its domain.
  void check() const;
};

/// Timing parameters of the parallel scheme from a parameter set.
ProtocolConfig protocol_from_params(const ParameterSet& params);

struct TrialRecord {
  double total_time = 0.0;        ///< s
  std::uint64_t attempts = 0;     ///< generation attempts summed over all links
  std::uint64_t swap_failures = 0;
  double max_storage_time = 0.0;  ///< s, longest any memory qubit waited
  bool success = true;            ///< false only when the storage cutoff was exceeded
};

struct TimingStats {
  double mean = 0.0;
  double variance = 0.0;  ///< sample variance (n - 1)
  double stderr_mean = 0.0;
  double p50 = 0.0;
  double p90 = 0.0;
  double p99 = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double success_fraction = 1.0;
  /// Elapsed time per successfully delivered pair (inf if none succeeded).
  double mean_time_per_success = 0.0;
};

/// Runs every trial; records are indexed by trial number.
std::vector<TrialRecord> simulate_trials(const ProtocolConfig& cfg);

TimingStats summarize(std::span<const TrialRecord> records, std::uint64_t seed);

TimingStats simulate_chain(const ProtocolConfig& cfg);

/// One trial in isolation; identical to the corresponding simulate_trials entry.
TrialRecord simulate_trial(const ProtocolConfig& cfg, std::uint64_t trial);

struct ComparisonReport {
  TimingStats mc;
  double analytic = 0.0;
  double ratio = 0.0;
  double ci_low = 0.0;   ///< 95% interval on the MC mean
  double ci_high = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Passes when |mc - analytic| <= tolerance * analytic + 3 stderr.
ComparisonReport compare_with_analytic(const TimingStats& mc, double analytic, double tolerance);
ComparisonReport compare_with_analytic(const ProtocolConfig& cfg, const RateResult& analytic,
                                       double tolerance);

struct Histogram {
  std::vector<double> edges;  ///< bins.size() + 1 edges, s
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
  double fraction_above_threshold = 0.0;
  double threshold = 0.0;
};

/// Distribution of max_storage_time across trials. `bins` uniform bins up to
/// the largest observed value; also reports the fraction above `threshold`.
Histogram storage_time_histogram(const ProtocolConfig& cfg, int bins = 50, double threshold = 1.0);
Histogram storage_time_histogram(std::span<const TrialRecord> records, int bins, double threshold);

/// CSV dump with header `trial, total_time_s, swap_failures, max_storage_s`.
void write_trials_csv(std::ostream& out, std::span<const TrialRecord> records);

}  // namespace qdrep
