#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdrep/params.hpp"

namespace qdrep {

// ---------------------------------------------------------------------------
// Entanglement generation
// ---------------------------------------------------------------------------

/// Purcell factor of an emitter detuned by `delta` (rad/s) from a cavity of
/// linewidth `kappa`: Lorentzian suppression of the resonant value.
double purcell_at_detuning(double purcell_resonant, double kappa, double delta);

struct EnhancedRates {
  double gamma_prime = 0.0;  ///< cavity-enhanced population decay rate
  double Gamma_prime = 0.0;  ///< homogeneous linewidth (FWHM), gamma' + 2 gamma*
};

EnhancedRates enhanced_rates(double gamma_r, double gamma_nr, double gamma_star, double purcell);

/// Barrett-Kok heralded-entanglement fidelity for two emitters with decay
/// rates gp_i, gp_j, linewidths Gp_i, Gp_j, and optical detuning delta_omega.
double barrett_kok_fidelity(double gp_i, double gp_j, double Gp_i, double Gp_j,
                            double delta_omega);

/// One emitter of a link: mean detuning from its cavity and spectral-diffusion
/// standard deviation (rad/s).
struct EmitterSpectrum {
  double mean_detuning = 0.0;
  double sigma = 0.0;
};

struct EntanglementModel {
  double purcell_resonant = 0.0;
  double kappa = 0.0;
  double gamma_r = 0.0;
  double gamma_nr = 0.0;
  double gamma_star = 0.0;
  EmitterSpectrum first;
  EmitterSpectrum second;

  static EntanglementModel from(const PhysicalParams& p);
};

struct QuadratureOptions {
  int initial_nodes = 21;
  int max_nodes = 336;
  double rel_tol = 1e-6;
};

struct EntanglementResult {
  double fidelity = 0.0;
  int nodes = 0;             ///< per-dimension node count of the accepted estimate
  double last_change = 0.0;  ///< |F(n) - F(n/2)|
};

/// Raised when node doubling fails to reach the tolerance.
class QuadratureNotConverged : public std::runtime_error {
 public:
  QuadratureNotConverged(double previous, double last, int nodes);
  double previous;
  double last;
  int nodes;
};

/// Barrett-Kok fidelity averaged over independent Gaussian spectral
/// diffusion of both emitters. Each emitter frequency is integrated with a
/// Gauss-Hermite product rule; the Purcell factor is recomputed at every
/// node because the emitter moves relative to a fixed cavity.
EntanglementResult entanglement_fidelity(const EntanglementModel& model,
                                         const QuadratureOptions& options = {});
EntanglementResult entanglement_fidelity(const PhysicalParams& p,
                                         const QuadratureOptions& options = {});

/// Single fixed-size product-rule evaluation (no convergence loop).
double entanglement_fidelity_fixed(const EntanglementModel& model, int nodes);

// ---------------------------------------------------------------------------
// State transfer
// ---------------------------------------------------------------------------

double electron_init_fidelity(const PhysicalParams& p);

/// Nuclear-polarization contribution to the write-read fidelity, interpolated
/// monotonically through the tabulated points (0.80, 0.977), (0.95, 0.998),
/// (1, 1). Polarizations below 0.80 throw std::domain_error.
double nuclear_init_fidelity(double polarization);

/// Spin-wave population retained under Gaussian quadrupolar inhomogeneity,
/// exp(-dm^4 sigma^2 t^2); sigma in s^-1.
double quadrupolar_factor(double sigma_q, int delta_m, double t);

double transfer_fidelity(double f_electron_init, double f_nuclear_init, double f_quad);

/// Hamiltonian-engineering pulse spacing that resonantly enhances the
/// delta_m spin-wave mode, 3 pi / (4 omega_Z dm).
double pulse_spacing(double omega_z_nuclear, int delta_m);

// ---------------------------------------------------------------------------
// Scattering gate
// ---------------------------------------------------------------------------

struct GateModel {
  double cooperativity = 0.0;
  double gamma = 0.0;             ///< emitter decay rate, rad/s
  double decoherence_rate = 0.0;  ///< xi, 1/s
  double photon_bandwidth = 0.0;  ///< delta_p, rad/s
  double sigma = 0.0;             ///< spectral diffusion std dev, rad/s
  double detuning_1 = 0.0;
  double detuning_2 = 0.0;
  double g_over_kappa = 0.0;

  static GateModel from(const PhysicalParams& p);
};

struct GateResult {
  double fidelity = 0.0;
  double gate_time = 0.0;
  double cooperativity_term = 0.0;  ///< 5 / (2C)
  double detuning_term = 0.0;       ///< (de1 - de2)^2 / (2 gamma^2 C)
  double decoherence_term = 0.0;    ///< xi T_gate
  double bandwidth_term = 0.0;      ///< (sigma^2 + delta_p^2) / (4 gamma^2 C^2) [...]
  std::vector<std::string> warnings;
};

/// Gate duration, twice the FWHM duration of a Gaussian photon.
double gate_time(double photon_bandwidth);

/// First-order fidelity of the cavity-assisted scattering CZ gate. Each
/// correction term above 0.05 adds a warning (expansion out of regime).
GateResult gate_fidelity(const GateModel& model);
GateResult gate_fidelity(const PhysicalParams& p);

// ---------------------------------------------------------------------------
// Readout
// ---------------------------------------------------------------------------

/// Poissonian fluorescence readout fidelity.
double readout_fidelity(double window, double dark_rate, double eta_c, double eta_d,
                        double drive, double gamma_prime);

/// Enhanced decay rate on cavity resonance used during readout.
double readout_gamma_prime(const PhysicalParams& p);

/// Drive amplitude that yields `target` readout fidelity (inverse of
/// readout_fidelity in `drive`). Throws std::domain_error when unattainable.
double readout_drive_for(double target, double window, double dark_rate, double eta_c,
                         double eta_d, double gamma_prime);

// ---------------------------------------------------------------------------
// Level splittings
// ---------------------------------------------------------------------------

struct SplittingResult {
  double ground = 0.0;     ///< Hz
  double excited = 0.0;    ///< Hz
  double overhauser = 0.0; ///< Hz
};

SplittingResult zeeman_splittings(double b_field, double g_electron, double g_hole,
                                  double polarization, double overhauser_max);

// ---------------------------------------------------------------------------
// Budget and chain composition
// ---------------------------------------------------------------------------

struct FidelityBudget {
  double electron_init = 0.0;
  double nuclear_init = 0.0;
  double quad = 0.0;
  double transfer = 0.0;
  double bk_nominal = 0.0;  ///< Barrett-Kok fidelity at the mean detunings
  double entanglement = 0.0;
  double gate = 0.0;
  double readout = 0.0;
  double total = 0.0;
  int nesting_level = 0;
  double purcell_resonant = 0.0;
  double polarization = 0.0;
  std::vector<std::string> warnings;

  bool in_regime() const { return warnings.empty(); }
};

/// Multiplicative end-to-end fidelity over l = 2^n links.
double overall_fidelity(double f_electron_init, double f_readout, double f_entanglement,
                        double f_transfer, double f_gate, int nesting_level);
double overall_fidelity(const FidelityBudget& budget, int nesting_level);

/// Evaluates every component from a parameter set and composes the total
/// at the set's nesting level.
FidelityBudget compute_budget(const ParameterSet& params);

struct ContourPoint {
  double purcell = 0.0;
  double polarization = 0.0;
  FidelityBudget budget;
};

/// Evaluates the full budget at n = 3 on the grid purcell x polarization,
/// taking C = F_res = purcell at each point. Row-major in purcell.
/// Points are evaluated in parallel; output order is fixed.
std::vector<ContourPoint> fidelity_contour(const ParameterSet& params,
                                           std::span<const double> purcell_grid,
                                           std::span<const double> polarization_grid,
                                           unsigned workers = 0);

}  // namespace qdrep
