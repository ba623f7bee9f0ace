#pragma once

#include <string_view>

#include "qdrep/params.hpp"

namespace qdrep {

enum class Scheme { kParallel, kSequential, kTwoPlusTwo, kDirect };

std::string_view scheme_name(Scheme scheme);

/// Outcome of a closed-form waiting-time evaluation. When either success
/// probability vanishes the pair is never delivered: `reachable()` is false,
/// mean_time is +inf and rate is 0.
struct RateResult {
  double p0 = 0.0;
  double p_swap = 0.0;
  double mean_time = 0.0;  ///< s
  double rate = 0.0;       ///< Hz
  Scheme scheme = Scheme::kParallel;

  bool reachable() const { return rate > 0.0; }
};

/// Fiber transmission over half an elementary link, exp(-L0 / (2 L_att)).
double transmission_probability(double elementary_length, double attenuation_length);

/// Branching ratio into the Purcell-enhanced path of a Voigt-geometry
/// emitter with two equal-strength decay channels.
double branching_ratio(double purcell);

/// Heralded entanglement success probability of one elementary link.
double link_success_probability(const LinkParams& link, double elementary_length);

/// Success probability of the scattering-gate swap, eta_s eta_c eta_cav eta_d.
double swap_success_probability(const LinkParams& link);

/// Duration of one generation attempt, L0 / c + tau_init.
double attempt_time(const LinkParams& link);

/// Mean delivery time when all links attempt in parallel.
RateResult mean_time_parallel(const LinkParams& link);
RateResult mean_time_parallel(const ParameterSet& params);

/// Mean delivery time when neighbouring links are generated one at a time.
/// At nesting level 0 this equals the parallel value.
RateResult mean_time_sequential(const LinkParams& link);
RateResult mean_time_sequential(const ParameterSet& params);

/// Mean delivery time of the photon-pair-source (2+2) comparison scheme.
/// Uses eta_s_pair as the source efficiency and has no reinitialization term.
RateResult mean_time_two_plus_two(const LinkParams& link);
RateResult mean_time_two_plus_two(const ParameterSet& params);

/// Direct single-photon transmission rate, source_rate * exp(-L / L_att).
double direct_transmission_rate(double length, double source_rate, double attenuation_length);

/// Length (m) in [lo, hi] at which the parallel repeater rate equals the
/// direct-transmission rate, found by bisection on the log ratio. Throws
/// std::domain_error when the two curves do not cross inside the bracket.
double repeater_crossover_length(const LinkParams& link, double lo, double hi);

}  // namespace qdrep
