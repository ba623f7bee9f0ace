#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qdrep/units.hpp"

namespace qdrep {

/// Emitter, cavity, spin and readout parameters.
///
/// Optical and spin rates are angular frequencies (rad/s), times are in
/// seconds, fields in tesla. `quad_sigma`, `overhauser_max`,
/// `dark_count_rate` are ordinary rates (s^-1, Hz) with no 2pi applied.
struct PhysicalParams {
  double gamma_r = 0.0;          ///< radiative decay rate
  double gamma_nr = 0.0;         ///< non-radiative decay rate
  double gamma_star = 0.0;       ///< optical pure dephasing
  double zpl_fwhm = 0.0;         ///< zero-phonon-line FWHM without Purcell enhancement
  double kappa = 0.0;            ///< cavity linewidth
  double g_cav = 0.0;            ///< emitter-cavity coupling
  double purcell_resonant = 0.0; ///< Purcell factor on cavity resonance
  double detuning = 0.0;         ///< emitter-cavity detuning during entanglement generation
  double sigma_sd = 0.0;         ///< spectral-diffusion standard deviation per emitter
  double t2_electron = 0.0;      ///< electron spin coherence time
  double b_field = 0.0;          ///< in-plane magnetic field
  double g_electron = 0.0;
  double g_hole = 0.0;
  double omega_z_nuclear = 0.0;  ///< nuclear Zeeman splitting
  double quad_sigma = 0.0;       ///< quadrupolar-shift spread, s^-1
  double nuclear_polarization = 0.0;
  double overhauser_max = 0.0;   ///< maximum Overhauser shift, Hz
  double readout_drive = 0.0;    ///< readout drive amplitude
  double dark_count_rate = 0.0;  ///< detector dark counts, Hz
  double readout_time = 0.0;

  double electron_init_fidelity = 0.0;
  double transfer_time = 0.0;    ///< duration of a full write-read cycle
  int delta_m = 2;               ///< nuclear spin-wave mode
  double photon_bandwidth = 0.0; ///< spectral std dev of the gate photon
  double sigma_gate = 0.0;       ///< spectral-diffusion std dev seen by the gate
  double gate_detuning_1 = 0.0;
  double gate_detuning_2 = 0.0;

  /// Total excited-state decay rate without Purcell enhancement.
  double gamma() const { return gamma_r + gamma_nr; }

  bool operator==(const PhysicalParams&) const = default;
};

/// Channel geometry and optical efficiencies.
struct LinkParams {
  double total_length = 0.0;     ///< m
  int nesting_level = 0;
  double attenuation_length = 0.0;
  double fiber_speed = 0.0;      ///< m/s
  double tau_init = 0.0;         ///< reinitialization time, s
  double zeta = 0.0;             ///< branching ratio into the heralding path
  double p_emit = 0.0;
  double eta_c = 0.0;
  double eta_d = 0.0;
  double eta_cav = 0.0;
  double eta_s = 0.0;            ///< gate single-photon source efficiency
  double eta_m = 0.0;            ///< external memory efficiency (2+2 scheme)
  double eta_fc = 1.0;           ///< frequency-conversion efficiency
  double eta_s_pair = 0.0;       ///< photon-pair source efficiency (2+2 scheme)
  double source_rate = 0.0;      ///< direct-transmission source rate, Hz

  int link_count() const { return 1 << nesting_level; }
  double elementary_length() const { return total_length / link_count(); }

  bool operator==(const LinkParams&) const = default;
};

struct ParameterSet {
  PhysicalParams physical;
  LinkParams link;
  /// Key -> where the value came from.
  std::map<std::string, std::string> provenance;
};

/// One `key = value` assignment together with its origin.
struct Assignment {
  std::string key;
  std::string value;
  std::string source;
};

/// Description of one configuration key.
struct KeyInfo {
  std::string_view key;
  Dimension dimension;
  std::string_view default_text;  ///< empty when derived from other keys
  std::string_view description;
};

/// All accepted configuration keys in serialization order.
std::span<const KeyInfo> config_keys();

ParameterSet default_parameters();

/// Splits config text into assignments. Blank lines and `#` comments are
/// ignored; anything else must be `key = value`.
std::vector<Assignment> parse_config_text(std::string_view text, std::string_view source);

/// Parses a `key=value` command-line override.
Assignment parse_override(std::string_view text);

/// Applies assignments over the defaults (later entries win), resolves
/// derived keys, and range-checks every field. Throws ConfigError.
ParameterSet build_parameters(std::span<const Assignment> assignments);

/// Reads a config file and applies `overrides` after it.
ParameterSet load_config(const std::filesystem::path& path,
                         std::span<const Assignment> overrides = {});

/// Writes every key in base units; parse -> build reproduces the set exactly.
std::string serialize(const ParameterSet& params);

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> notes;
  double cooperativity = 0.0;         ///< F_res * gamma_r / gamma, used by the gate model
  double cooperativity_coupling = 0.0;///< 4 g^2 / (kappa gamma) from g_cav and kappa

  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const ParameterSet& params);

/// Cooperativity as identified with the resonant Purcell factor.
double cooperativity(const PhysicalParams& p);

}  // namespace qdrep
