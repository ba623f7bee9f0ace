#include "qdrep/rates.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qdrep {
namespace {

RateResult finish(double p0, double p_swap, double numerator, double denominator, Scheme scheme) {
  RateResult r;
  r.p0 = p0;
  r.p_swap = p_swap;
  r.scheme = scheme;
  if (denominator <= 0.0) {
    r.mean_time = std::numeric_limits<double>::infinity();
    r.rate = 0.0;
  } else {
    r.mean_time = numerator / denominator;
    r.rate = 1.0 / r.mean_time;
  }
  return r;
}

}  // namespace

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::kParallel: return "parallel";
    case Scheme::kSequential: return "sequential";
    case Scheme::kTwoPlusTwo: return "two_plus_two";
    case Scheme::kDirect: return "direct";
  }
  return "unknown";
}

double transmission_probability(double elementary_length, double attenuation_length) {
  if (attenuation_length <= 0.0) {
    throw std::invalid_argument("transmission_probability: attenuation length must be positive");
  }
  if (elementary_length < 0.0) {
    throw std::invalid_argument("transmission_probability: negative length");
  }
  return std::exp(-elementary_length / (2.0 * attenuation_length));
}

double branching_ratio(double purcell) {
  if (purcell < 0.0) throw std::invalid_argument("branching_ratio: negative Purcell factor");
  return (1.0 + purcell) / (2.0 + purcell);
}

double link_success_probability(const LinkParams& link, double elementary_length) {
  const double eta_t = transmission_probability(elementary_length, link.attenuation_length);
  const double amplitude = link.zeta * eta_t * link.p_emit * link.eta_c * link.eta_d * link.eta_fc;
  return 0.5 * amplitude * amplitude;
}

double swap_success_probability(const LinkParams& link) {
  return link.eta_s * link.eta_c * link.eta_cav * link.eta_d;
}

double attempt_time(const LinkParams& link) {
  return link.elementary_length() / link.fiber_speed + link.tau_init;
}

RateResult mean_time_parallel(const LinkParams& link) {
  const int n = link.nesting_level;
  const double p0 = link_success_probability(link, link.elementary_length());
  const double ps = swap_success_probability(link);
  return finish(p0, ps, std::pow(1.5, n) * attempt_time(link), p0 * std::pow(ps, n),
                Scheme::kParallel);
}

RateResult mean_time_sequential(const LinkParams& link) {
  const int n = link.nesting_level;
  if (n == 0) {
    RateResult r = mean_time_parallel(link);
    r.scheme = Scheme::kSequential;
    return r;
  }
  const double p0 = link_success_probability(link, link.elementary_length());
  const double ps = swap_success_probability(link);
  return finish(p0, ps, 2.0 * std::pow(1.5, n - 1) * attempt_time(link), p0 * std::pow(ps, n),
                Scheme::kSequential);
}

RateResult mean_time_two_plus_two(const LinkParams& link) {
  const int n = link.nesting_level;
  const double l0 = link.elementary_length();
  const double eta_t = transmission_probability(l0, link.attenuation_length);
  const double a = eta_t * link.eta_s_pair * link.eta_d;
  const double p0 = 0.5 * a * a;
  const double eta_m2 = link.eta_m * link.eta_m;
  const double ps = 0.5 * link.eta_d * link.eta_d * eta_m2 * eta_m2;
  return finish(p0, ps, std::pow(1.5, n) * (l0 / link.fiber_speed), p0 * std::pow(ps, n),
                Scheme::kTwoPlusTwo);
}

RateResult mean_time_parallel(const ParameterSet& params) { return mean_time_parallel(params.link); }
RateResult mean_time_sequential(const ParameterSet& params) {
  return mean_time_sequential(params.link);
}
RateResult mean_time_two_plus_two(const ParameterSet& params) {
  return mean_time_two_plus_two(params.link);
}

double direct_transmission_rate(double length, double source_rate, double attenuation_length) {
  if (length < 0.0) throw std::invalid_argument("direct_transmission_rate: negative length");
  if (attenuation_length <= 0.0) {
    throw std::invalid_argument("direct_transmission_rate: attenuation length must be positive");
  }
  return source_rate * std::exp(-length / attenuation_length);
}

double repeater_crossover_length(const LinkParams& link, double lo, double hi) {
  auto gap = [&](double length) {
    LinkParams l = link;
    l.total_length = length;
    const RateResult r = mean_time_parallel(l);
    // log(repeater) - log(direct); direct decays as exp(-L/L_att).
    return std::log(r.rate) -
           (std::log(link.source_rate) - length / link.attenuation_length);
  };
  double g_lo = gap(lo);
  const double g_hi = gap(hi);
  if (!(g_lo < 0.0 && g_hi > 0.0)) {
    throw std::domain_error("repeater_crossover_length: no crossover inside the bracket");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-9 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double g = gap(mid);
    if (g < 0.0) {
      lo = mid;
      g_lo = g;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace qdrep
