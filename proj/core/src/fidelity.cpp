#include "qdrep/fidelity.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "qdrep/interpolation.hpp"
#include "qdrep/quadrature.hpp"
#include "qdrep/units.hpp"

namespace qdrep {
namespace {

constexpr double kRegimeThreshold = 0.05;

const QuadratureRule& normal_rule(int n) {
  static std::mutex mu;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_hermite_normal(n)).first;
  return it->second;
}

std::string describe(const char* what, double value) {
  std::ostringstream os;
  os << what << " = " << value;
  return os.str();
}

}  // namespace

double purcell_at_detuning(double purcell_resonant, double kappa, double delta) {
  if (kappa <= 0.0) throw std::invalid_argument("purcell_at_detuning: kappa must be positive");
  const double k2 = kappa * kappa;
  return k2 / (4.0 * delta * delta + k2) * purcell_resonant;
}

EnhancedRates enhanced_rates(double gamma_r, double gamma_nr, double gamma_star, double purcell) {
  const double gp = gamma_r * (1.0 + purcell) + gamma_nr;
  return {gp, gp + 2.0 * gamma_star};
}

double barrett_kok_fidelity(double gp_i, double gp_j, double Gp_i, double Gp_j,
                            double delta_omega) {
  const double sum = Gp_i + Gp_j;
  return 0.5 * (1.0 + 4.0 * gp_i * gp_j / (sum * sum + 4.0 * delta_omega * delta_omega));
}

EntanglementModel EntanglementModel::from(const PhysicalParams& p) {
  EntanglementModel m;
  m.purcell_resonant = p.purcell_resonant;
  m.kappa = p.kappa;
  m.gamma_r = p.gamma_r;
  m.gamma_nr = p.gamma_nr;
  m.gamma_star = p.gamma_star;
  m.first = {p.detuning, p.sigma_sd};
  m.second = {p.detuning, p.sigma_sd};
  return m;
}

QuadratureNotConverged::QuadratureNotConverged(double previous_, double last_, int nodes_)
    : std::runtime_error("entanglement_fidelity: quadrature did not converge (last estimates " +
                         std::to_string(previous_) + ", " + std::to_string(last_) + " at " +
                         std::to_string(nodes_) + " nodes)"),
      previous(previous_),
      last(last_),
      nodes(nodes_) {}

double entanglement_fidelity_fixed(const EntanglementModel& m, int nodes) {
  if (m.first.sigma < 0.0 || m.second.sigma < 0.0) {
    throw std::invalid_argument("entanglement_fidelity: negative spectral diffusion");
  }
  const QuadratureRule& rule = normal_rule(nodes);
  const std::size_t n = rule.nodes.size();

  struct NodeRates {
    double detuning;
    EnhancedRates rates;
  };
  auto node_rates = [&](const EmitterSpectrum& e) {
    std::vector<NodeRates> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = e.mean_detuning + e.sigma * rule.nodes[i];
      const double fp = purcell_at_detuning(m.purcell_resonant, m.kappa, d);
      out[i] = {d, enhanced_rates(m.gamma_r, m.gamma_nr, m.gamma_star, fp)};
    }
    return out;
  };
  const auto a = node_rates(m.first);
  const auto b = node_rates(m.second);

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      row += rule.weights[j] * barrett_kok_fidelity(a[i].rates.gamma_prime, b[j].rates.gamma_prime,
                                                    a[i].rates.Gamma_prime, b[j].rates.Gamma_prime,
                                                    a[i].detuning - b[j].detuning);
    }
    total += rule.weights[i] * row;
  }
  return total;
}

EntanglementResult entanglement_fidelity(const EntanglementModel& model,
                                         const QuadratureOptions& options) {
  int n = options.initial_nodes;
  double prev = entanglement_fidelity_fixed(model, n);
  double before_prev = prev;
  while (2 * n <= options.max_nodes) {
    const double cur = entanglement_fidelity_fixed(model, 2 * n);
    const double change = std::abs(cur - prev);
    if (change <= options.rel_tol * std::abs(cur)) return {cur, 2 * n, change};
    before_prev = prev;
    prev = cur;
    n *= 2;
  }
  throw QuadratureNotConverged(before_prev, prev, n);
}

EntanglementResult entanglement_fidelity(const PhysicalParams& p, const QuadratureOptions& options) {
  return entanglement_fidelity(EntanglementModel::from(p), options);
}

double electron_init_fidelity(const PhysicalParams& p) { return p.electron_init_fidelity; }

double nuclear_init_fidelity(double polarization) {
  static constexpr std::array kPol{0.80, 0.95, 1.0};
  static constexpr std::array kFid{0.977, 0.998, 1.0};
  static const MonotoneCubic table(kPol, kFid);
  if (!(polarization >= table.min_x() && polarization <= table.max_x())) {
    throw std::domain_error("nuclear_init_fidelity: polarization " + std::to_string(polarization) +
                            " outside tabulated range [0.80, 1]");
  }
  return table(polarization);
}

double quadrupolar_factor(double sigma_q, int delta_m, double t) {
  if (delta_m != 1 && delta_m != 2) throw std::invalid_argument("quadrupolar_factor: dm must be 1 or 2");
  if (t < 0.0) throw std::invalid_argument("quadrupolar_factor: negative time");
  const double dm2 = static_cast<double>(delta_m * delta_m);
  const double st = sigma_q * t;
  return std::exp(-dm2 * dm2 * st * st);
}

double transfer_fidelity(double f_electron_init, double f_nuclear_init, double f_quad) {
  return f_electron_init * f_nuclear_init * f_quad;
}

double pulse_spacing(double omega_z_nuclear, int delta_m) {
  if (omega_z_nuclear <= 0.0) throw std::invalid_argument("pulse_spacing: omega_Z must be positive");
  if (delta_m != 1 && delta_m != 2) throw std::invalid_argument("pulse_spacing: dm must be 1 or 2");
  return 3.0 * kPi / (4.0 * omega_z_nuclear * delta_m);
}

GateModel GateModel::from(const PhysicalParams& p) {
  GateModel g;
  g.cooperativity = qdrep::cooperativity(p);
  g.gamma = p.gamma();
  g.decoherence_rate = p.t2_electron > 0.0 ? 1.0 / (2.0 * p.t2_electron)
                                           : std::numeric_limits<double>::infinity();
  g.photon_bandwidth = p.photon_bandwidth;
  g.sigma = p.sigma_gate;
  g.detuning_1 = p.gate_detuning_1;
  g.detuning_2 = p.gate_detuning_2;
  g.g_over_kappa = p.kappa > 0.0 ? p.g_cav / p.kappa : 0.0;
  return g;
}

double gate_time(double photon_bandwidth) {
  if (photon_bandwidth <= 0.0) throw std::invalid_argument("gate_time: photon bandwidth must be positive");
  return 8.0 * kPi * std::sqrt(2.0 * std::numbers::ln2) / photon_bandwidth;
}

GateResult gate_fidelity(const GateModel& m) {
  if (m.cooperativity <= 0.0) throw std::invalid_argument("gate_fidelity: cooperativity must be positive");
  if (m.gamma <= 0.0) throw std::invalid_argument("gate_fidelity: gamma must be positive");
  GateResult r;
  r.gate_time = gate_time(m.photon_bandwidth);

  const double c = m.cooperativity;
  const double g2 = m.gamma * m.gamma;
  const double x2 = 4.0 * m.g_over_kappa * m.g_over_kappa;  // (2g/kappa)^2
  const double bracket = 11.0 - 20.0 * x2 + 12.0 * x2 * x2;
  const double dd = m.detuning_1 - m.detuning_2;

  r.cooperativity_term = 5.0 / (2.0 * c);
  r.detuning_term = dd * dd / (2.0 * g2 * c);
  r.decoherence_term = m.decoherence_rate * r.gate_time;
  r.bandwidth_term = (m.sigma * m.sigma + m.photon_bandwidth * m.photon_bandwidth) /
                     (4.0 * g2 * c * c) * bracket;
  r.fidelity = 1.0 - r.cooperativity_term - r.detuning_term - r.decoherence_term - r.bandwidth_term;

  auto check = [&](const char* name, double term) {
    if (std::abs(term) > kRegimeThreshold) {
      r.warnings.push_back(std::string("gate: ") + describe(name, term) +
                           " exceeds 0.05; first-order expansion out of regime");
    }
  };
  check("5/(2C)", r.cooperativity_term);
  check("detuning term", r.detuning_term);
  check("xi*T_gate", r.decoherence_term);
  check("bandwidth term", r.bandwidth_term);
  return r;
}

GateResult gate_fidelity(const PhysicalParams& p) { return gate_fidelity(GateModel::from(p)); }

double readout_fidelity(double window, double dark_rate, double eta_c, double eta_d, double drive,
                        double gamma_prime) {
  if (window < 0.0 || dark_rate < 0.0) throw std::invalid_argument("readout_fidelity: negative window or dark rate");
  if (gamma_prime <= 0.0) throw std::invalid_argument("readout_fidelity: gamma' must be positive");
  const double detected = window * eta_c * eta_d * drive * drive / gamma_prime;
  return 0.5 * (1.0 + std::exp(-window * dark_rate) - std::exp(-detected));
}

double readout_gamma_prime(const PhysicalParams& p) {
  return enhanced_rates(p.gamma_r, p.gamma_nr, 0.0, p.purcell_resonant).gamma_prime;
}

double readout_drive_for(double target, double window, double dark_rate, double eta_c, double eta_d,
                         double gamma_prime) {
  const double residual = 1.0 + std::exp(-window * dark_rate) - 2.0 * target;
  if (!(residual > 0.0 && residual < 1.0) || window <= 0.0 || eta_c * eta_d <= 0.0) {
    throw std::domain_error("readout_drive_for: target fidelity not attainable");
  }
  const double x = -std::log(residual);
  return std::sqrt(x * gamma_prime / (window * eta_c * eta_d));
}

SplittingResult zeeman_splittings(double b_field, double g_electron, double g_hole,
                                  double polarization, double overhauser_max) {
  if (b_field < 0.0) throw std::invalid_argument("zeeman_splittings: negative field");
  SplittingResult s;
  s.overhauser = polarization * overhauser_max;
  s.ground = std::abs(kBohrMagnetonOverH * g_electron * b_field) + s.overhauser;
  s.excited = std::abs(kBohrMagnetonOverH * g_hole * b_field) + s.overhauser;
  return s;
}

double overall_fidelity(double f_electron_init, double f_readout, double f_entanglement,
                        double f_transfer, double f_gate, int nesting_level) {
  if (nesting_level < 0) throw std::invalid_argument("overall_fidelity: negative nesting level");
  const double l = std::ldexp(1.0, nesting_level);
  return std::pow(f_electron_init, 2.0 * l) * std::pow(f_readout, 2.0 * (l - 1.0)) *
         std::pow(f_entanglement * f_transfer * f_transfer, l) * std::pow(f_gate, l - 1.0);
}

double overall_fidelity(const FidelityBudget& b, int nesting_level) {
  return overall_fidelity(b.electron_init, b.readout, b.entanglement, b.transfer, b.gate,
                          nesting_level);
}

FidelityBudget compute_budget(const ParameterSet& params) {
  const PhysicalParams& p = params.physical;
  FidelityBudget b;
  b.nesting_level = params.link.nesting_level;
  b.purcell_resonant = p.purcell_resonant;
  b.polarization = p.nuclear_polarization;

  b.electron_init = electron_init_fidelity(p);
  b.nuclear_init = nuclear_init_fidelity(p.nuclear_polarization);
  b.quad = quadrupolar_factor(p.quad_sigma, p.delta_m, p.transfer_time);
  b.transfer = transfer_fidelity(b.electron_init, b.nuclear_init, b.quad);

  const auto model = EntanglementModel::from(p);
  const auto ra = enhanced_rates(p.gamma_r, p.gamma_nr, p.gamma_star,
                                 purcell_at_detuning(p.purcell_resonant, p.kappa, model.first.mean_detuning));
  const auto rb = enhanced_rates(p.gamma_r, p.gamma_nr, p.gamma_star,
                                 purcell_at_detuning(p.purcell_resonant, p.kappa, model.second.mean_detuning));
  b.bk_nominal = barrett_kok_fidelity(ra.gamma_prime, rb.gamma_prime, ra.Gamma_prime, rb.Gamma_prime,
                                      model.first.mean_detuning - model.second.mean_detuning);
  b.entanglement = entanglement_fidelity(model).fidelity;

  GateResult gate = gate_fidelity(p);
  b.gate = gate.fidelity;
  b.warnings = std::move(gate.warnings);

  const double gp = readout_gamma_prime(p);
  b.readout = readout_fidelity(p.readout_time, p.dark_count_rate, params.link.eta_c,
                               params.link.eta_d, p.readout_drive, gp);
  if (p.readout_drive > gp / 5.0) {
    b.warnings.push_back("readout: drive " + std::to_string(p.readout_drive) +
                         " rad/s exceeds gamma'/5; weak-drive emission rate not valid");
  }

  for (auto [name, v] : {std::pair{"F_gate", b.gate}, std::pair{"F_readout", b.readout},
                         std::pair{"F_ent", b.entanglement}, std::pair{"F_transfer", b.transfer}}) {
    if (v < 0.0 || v > 1.0) b.warnings.push_back(describe(name, v) + " outside [0, 1]");
  }

  b.total = overall_fidelity(b, b.nesting_level);
  return b;
}

std::vector<ContourPoint> fidelity_contour(const ParameterSet& params,
                                           std::span<const double> purcell_grid,
                                           std::span<const double> polarization_grid,
                                           unsigned workers) {
  if (purcell_grid.empty() || polarization_grid.empty()) {
    throw std::invalid_argument("fidelity_contour: empty grid");
  }
  const std::size_t rows = purcell_grid.size();
  const std::size_t cols = polarization_grid.size();
  std::vector<ContourPoint> out(rows * cols);

  std::atomic<std::size_t> next{0};
  std::mutex error_mu;
  std::exception_ptr error;
  auto work = [&] {
    for (std::size_t k = next++; k < out.size(); k = next++) {
      try {
        ParameterSet local = params;
        local.link.nesting_level = 3;
        local.physical.purcell_resonant = purcell_grid[k / cols];
        local.physical.nuclear_polarization = polarization_grid[k % cols];
        out[k] = {purcell_grid[k / cols], polarization_grid[k % cols], compute_budget(local)};
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        next = out.size();
      }
    }
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, out.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < workers; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace qdrep
