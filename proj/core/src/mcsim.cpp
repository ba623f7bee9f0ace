#include "qdrep/mcsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace qdrep {
namespace {

/// Counter-based stream: SplitMix64 over a per-trial key, so each trial
/// draws the same numbers regardless of which thread runs it.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial) : state_(mix(seed ^ mix(trial + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform in (0, 1].
  double uniform() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

  /// Number of Bernoulli(p) trials up to and including the first success.
  std::uint64_t geometric(double p) {
    if (p >= 1.0) return 1;
    const double g = std::floor(std::log(uniform()) / std::log1p(-p));
    return 1 + static_cast<std::uint64_t>(g);
  }

  bool bernoulli(double p) { return p >= 1.0 || uniform() <= p; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

struct Segment {
  double done = 0.0;         ///< time the segment's pair is available
  double created_left = 0.0; ///< creation time of the link holding the left end qubit
  double created_right = 0.0;
};

class TrialRunner {
 public:
  TrialRunner(const ProtocolConfig& cfg, std::uint64_t trial) : cfg_(cfg), rng_(cfg.seed, trial) {}

  TrialRecord run() {
    const Segment top = build(cfg_.nesting_level, 0.0);
    record_.total_time = top.done;
    // End qubits wait from creation until delivery.
    store(top.done - top.created_left);
    store(top.done - top.created_right);
    record_.success = !(record_.max_storage_time > cfg_.memory_cutoff);
    return record_;
  }

 private:
  void store(double dt) { record_.max_storage_time = std::max(record_.max_storage_time, dt); }

  Segment build(int level, double start) {
    if (level == 0) {
      const std::uint64_t k = rng_.geometric(cfg_.p0);
      record_.attempts += k;
      const double t = start + static_cast<double>(k) * cfg_.slot_time;
      return {t, t, t};
    }
    for (;;) {
      const Segment left = build(level - 1, start);
      const Segment right = build(level - 1, start);
      const double ready = std::max(left.done, right.done);
      const double end = ready + cfg_.swap_time;
      // The inner qubits are measured by the swap; the outer ones keep waiting.
      store(end - left.created_right);
      store(end - right.created_left);
      if (rng_.bernoulli(cfg_.p_swap)) return {end, left.created_left, right.created_right};
      ++record_.swap_failures;
      store(end - left.created_left);
      store(end - right.created_right);
      start = end;
    }
  }

  const ProtocolConfig& cfg_;
  TrialRng rng_;
  TrialRecord record_;
};

double percentile(std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

void ProtocolConfig::check() const {
  if (nesting_level < 0 || nesting_level > 24) throw std::invalid_argument("nesting_level must be in [0, 24]");
  if (!(p0 > 0.0 && p0 <= 1.0)) throw std::invalid_argument("p0 must be in (0, 1]");
  if (!(p_swap > 0.0 && p_swap <= 1.0)) throw std::invalid_argument("p_swap must be in (0, 1]");
  if (!(slot_time > 0.0) || !std::isfinite(slot_time)) throw std::invalid_argument("slot_time must be positive");
  if (!(swap_time >= 0.0) || !std::isfinite(swap_time)) throw std::invalid_argument("swap_time must be >= 0");
  if (!(memory_cutoff > 0.0)) throw std::invalid_argument("memory_cutoff must be positive");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
}

ProtocolConfig protocol_from_params(const ParameterSet& params) {
  const LinkParams& link = params.link;
  ProtocolConfig cfg;
  cfg.nesting_level = link.nesting_level;
  cfg.p0 = link_success_probability(link, link.elementary_length());
  cfg.p_swap = swap_success_probability(link);
  cfg.slot_time = attempt_time(link);
  return cfg;
}

TrialRecord simulate_trial(const ProtocolConfig& cfg, std::uint64_t trial) {
  cfg.check();
  return TrialRunner(cfg, trial).run();
}

std::vector<TrialRecord> simulate_trials(const ProtocolConfig& cfg) {
  cfg.check();
  std::vector<TrialRecord> records(cfg.trials);
  unsigned workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, cfg.trials));

  constexpr std::uint64_t kChunk = 1024;
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto work = [&] {
    try {
      for (;;) {
        const std::uint64_t begin = next.fetch_add(kChunk);
        if (begin >= cfg.trials || failed.load()) return;
        const std::uint64_t end = std::min(begin + kChunk, cfg.trials);
        for (std::uint64_t t = begin; t < end; ++t) records[t] = TrialRunner(cfg, t).run();
      }
    } catch (...) {
      if (!failed.exchange(true)) error = std::current_exception();
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return records;
}

TimingStats summarize(std::span<const TrialRecord> records, std::uint64_t seed) {
  TimingStats s;
  s.trials = records.size();
  s.seed = seed;
  if (records.empty()) return s;

  // Two-pass moments in trial order so the result is independent of threading.
  double sum = 0.0;
  std::uint64_t ok = 0;
  for (const auto& r : records) {
    sum += r.total_time;
    ok += r.success ? 1 : 0;
  }
  const double n = static_cast<double>(records.size());
  s.mean = sum / n;
  double ss = 0.0;
  for (const auto& r : records) ss += (r.total_time - s.mean) * (r.total_time - s.mean);
  s.variance = records.size() > 1 ? ss / (n - 1.0) : 0.0;
  s.stderr_mean = std::sqrt(s.variance / n);

  std::vector<double> times;
  times.reserve(records.size());
  for (const auto& r : records) times.push_back(r.total_time);
  std::sort(times.begin(), times.end());
  s.p50 = percentile(times, 0.50);
  s.p90 = percentile(times, 0.90);
  s.p99 = percentile(times, 0.99);

  s.success_fraction = static_cast<double>(ok) / n;
  s.mean_time_per_success = ok > 0 ? sum / static_cast<double>(ok) : std::numeric_limits<double>::infinity();
  return s;
}

TimingStats simulate_chain(const ProtocolConfig& cfg) {
  const auto records = simulate_trials(cfg);
  return summarize(records, cfg.seed);
}

ComparisonReport compare_with_analytic(const TimingStats& mc, double analytic, double tolerance) {
  ComparisonReport r;
  r.mc = mc;
  r.analytic = analytic;
  r.tolerance = tolerance;
  r.ratio = analytic > 0.0 ? mc.mean / analytic : std::numeric_limits<double>::quiet_NaN();
  r.ci_low = mc.mean - 1.96 * mc.stderr_mean;
  r.ci_high = mc.mean + 1.96 * mc.stderr_mean;
  r.pass = std::isfinite(analytic) && std::abs(mc.mean - analytic) <= tolerance * analytic + 3.0 * mc.stderr_mean;
  return r;
}

ComparisonReport compare_with_analytic(const ProtocolConfig& cfg, const RateResult& analytic, double tolerance) {
  return compare_with_analytic(simulate_chain(cfg), analytic.mean_time, tolerance);
}

Histogram storage_time_histogram(std::span<const TrialRecord> records, int bins, double threshold) {
  if (bins < 1) throw std::invalid_argument("storage_time_histogram: bins must be >= 1");
  Histogram h;
  h.threshold = threshold;
  h.total = records.size();
  double top = 0.0;
  std::uint64_t above = 0;
  for (const auto& r : records) {
    top = std::max(top, r.max_storage_time);
    if (r.max_storage_time > threshold) ++above;
  }
  if (top <= 0.0) top = 1.0;  // all zero: one meaningful bin at the origin
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) h.edges[i] = top * i / bins;
  h.counts.assign(bins, 0);
  for (const auto& r : records) {
    auto b = static_cast<int>(r.max_storage_time / top * bins);
    h.counts[std::clamp(b, 0, bins - 1)]++;
  }
  h.fraction_above_threshold = records.empty() ? 0.0 : static_cast<double>(above) / static_cast<double>(records.size());
  return h;
}

Histogram storage_time_histogram(const ProtocolConfig& cfg, int bins, double threshold) {
  const auto records = simulate_trials(cfg);
  return storage_time_histogram(records, bins, threshold);
}

void write_trials_csv(std::ostream& out, std::span<const TrialRecord> records) {
  out << "trial, total_time_s, swap_failures, max_storage_s\n";
  char buf[128];
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu, %.6e, %llu, %.6e\n", i, records[i].total_time,
                  static_cast<unsigned long long>(records[i].swap_failures), records[i].max_storage_time);
    out << buf;
  }
}

}  // namespace qdrep
