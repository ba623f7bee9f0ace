#include "qdrep/params.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace qdrep {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Nuclear (75As) gyromagnetic ratio, rad/s per tesla.
constexpr double kArsenicGyro = kTwoPi * 7.22e6;

struct Field {
  KeyInfo info;
  double (*get)(const ParameterSet&);
  void (*set)(ParameterSet&, double);
  double lo;
  double hi;
  bool stored = true;  // false for input-only aliases
};

#define QDREP_PHYS(member) \
  [](const ParameterSet& s) { return static_cast<double>(s.physical.member); }, \
  [](ParameterSet& s, double v) { s.physical.member = static_cast<decltype(s.physical.member)>(v); }
#define QDREP_LINK(member) \
  [](const ParameterSet& s) { return static_cast<double>(s.link.member); }, \
  [](ParameterSet& s, double v) { s.link.member = static_cast<decltype(s.link.member)>(v); }

using D = Dimension;

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      // emitter
      {{"gamma_r", D::kFrequency, "2pi*0.59 GHz", "radiative decay rate of a GaAs/AlGaAs dot"}, QDREP_PHYS(gamma_r), 0, kInf},
      {{"gamma_nr", D::kFrequency, "0 Hz", "non-radiative decay rate (negligible)"}, QDREP_PHYS(gamma_nr), 0, kInf},
      {{"Gamma", D::kFrequency, "2pi*0.64 GHz", "zero-phonon-line FWHM without cavity"}, QDREP_PHYS(zpl_fwhm), 0, kInf},
      {{"gamma_star", D::kFrequency, "", "pure dephasing, derived as (Gamma - gamma_r - gamma_nr)/2"}, QDREP_PHYS(gamma_star), 0, kInf},
      {{"kappa", D::kFrequency, "2pi*100 GHz", "cavity linewidth"}, QDREP_PHYS(kappa), 0, kInf},
      {{"g_cav", D::kFrequency, "", "emitter-cavity coupling, derived as 0.1 * kappa"}, QDREP_PHYS(g_cav), 0, kInf},
      {{"F_res", D::kDimensionless, "500", "Purcell factor on cavity resonance"}, QDREP_PHYS(purcell_resonant), 0, kInf},
      {{"detuning", D::kFrequency, "2pi*275 GHz", "emitter-cavity detuning during entanglement generation"}, QDREP_PHYS(detuning), -kInf, kInf},
      {{"sd_fwhm", D::kFrequency, "2pi*500 MHz", "spectral-diffusion FWHM (input alias of sigma_sd)"}, nullptr, nullptr, 0, kInf, false},
      {{"sigma_sd", D::kFrequency, "", "spectral-diffusion standard deviation, derived from sd_fwhm"}, QDREP_PHYS(sigma_sd), 0, kInf},
      // spin
      {{"T2_electron", D::kTime, "50 us", "electron spin coherence time"}, QDREP_PHYS(t2_electron), 0, kInf},
      {{"B_x", D::kField, "6.6 T", "in-plane magnetic field"}, QDREP_PHYS(b_field), 0, kInf},
      {{"g_e", D::kDimensionless, "-0.076", "electron g-factor"}, QDREP_PHYS(g_electron), -kInf, kInf},
      {{"g_h", D::kDimensionless, "1.309", "hole g-factor"}, QDREP_PHYS(g_hole), -kInf, kInf},
      {{"omega_Z_nuclear", D::kFrequency, "", "nuclear Zeeman splitting, derived as 2pi*7.22 MHz/T * B_x"}, QDREP_PHYS(omega_z_nuclear), 0, kInf},
      {{"sigma_Q", D::kFrequency, "50 kHz", "quadrupolar-shift spread (s^-1, no 2pi)"}, QDREP_PHYS(quad_sigma), 0, kInf},
      {{"nuclear_polarization", D::kDimensionless, "0.95", "nuclear spin polarization"}, QDREP_PHYS(nuclear_polarization), 0, 1},
      {{"Delta_OH_max", D::kFrequency, "31 GHz", "maximum Overhauser shift in GaAs (Hz)"}, QDREP_PHYS(overhauser_max), 0, kInf},
      {{"F_e_init", D::kDimensionless, "0.99996", "electron initialization fidelity"}, QDREP_PHYS(electron_init_fidelity), 0, 1},
      {{"t_transfer", D::kTime, "330 ns", "write-read cycle duration (2 x 165 ns)"}, QDREP_PHYS(transfer_time), 0, kInf},
      {{"delta_m", D::kInteger, "2", "nuclear spin-wave mode"}, QDREP_PHYS(delta_m), 1, 2},
      // gate
      {{"delta_p", D::kFrequency, "2pi*2.4 GHz", "gate photon spectral standard deviation"}, QDREP_PHYS(photon_bandwidth), 0, kInf},
      {{"sigma_p", D::kFrequency, "2pi*500 MHz", "spectral diffusion standard deviation in the gate"}, QDREP_PHYS(sigma_gate), 0, kInf},
      {{"delta_eps1", D::kFrequency, "0 Hz", "first dot detuning from the cavity in the gate"}, QDREP_PHYS(gate_detuning_1), -kInf, kInf},
      {{"delta_eps2", D::kFrequency, "0 Hz", "second dot detuning from the cavity in the gate"}, QDREP_PHYS(gate_detuning_2), -kInf, kInf},
      // readout
      {{"Omega_readout", D::kFrequency, "2pi*1 GHz", "readout drive amplitude (gives F_readout = 0.99983 at F_res = 500)"}, QDREP_PHYS(readout_drive), 0, kInf},
      {{"D_dark", D::kFrequency, "500 Hz", "detector dark-count rate"}, QDREP_PHYS(dark_count_rate), 0, kInf},
      {{"T_readout", D::kTime, "600 ns", "readout window"}, QDREP_PHYS(readout_time), 0, kInf},
      // link
      {{"L_total", D::kLength, "1000 km", "end-to-end channel length"}, QDREP_LINK(total_length), 0, kInf},
      {{"n_nest", D::kInteger, "3", "nesting level"}, QDREP_LINK(nesting_level), 0, 24},
      {{"L_att", D::kLength, "25 km", "fiber attenuation length (0.17 dB/km)"}, QDREP_LINK(attenuation_length), 0, kInf},
      {{"c_fiber", D::kSpeed, "2e8 m/s", "signal speed in fiber"}, QDREP_LINK(fiber_speed), 0, kInf},
      {{"tau_init", D::kTime, "0.2 us", "reinitialization time after a failed attempt"}, QDREP_LINK(tau_init), 0, kInf},
      {{"zeta", D::kDimensionless, "0.94", "Purcell-enhanced branching ratio (F_p = 16)"}, QDREP_LINK(zeta), 0, 1},
      {{"p_emit", D::kDimensionless, "0.8", "cavity-mode emission probability"}, QDREP_LINK(p_emit), 0, 1},
      {{"eta_c", D::kDimensionless, "0.9", "collection efficiency"}, QDREP_LINK(eta_c), 0, 1},
      {{"eta_d", D::kDimensionless, "0.9", "detector efficiency"}, QDREP_LINK(eta_d), 0, 1},
      {{"eta_cav", D::kDimensionless, "0.9", "cavity efficiency in the gate"}, QDREP_LINK(eta_cav), 0, 1},
      {{"eta_s", D::kDimensionless, "", "gate source efficiency, derived as p_emit"}, QDREP_LINK(eta_s), 0, 1},
      {{"eta_m", D::kDimensionless, "0.9", "external memory efficiency (2+2 scheme)"}, QDREP_LINK(eta_m), 0, 1},
      {{"eta_fc", D::kDimensionless, "1", "frequency-conversion efficiency"}, QDREP_LINK(eta_fc), 0, 1},
      {{"eta_s_pair", D::kDimensionless, "0.65", "photon-pair source efficiency (2+2 scheme)"}, QDREP_LINK(eta_s_pair), 0, 1},
      {{"source_rate", D::kFrequency, "10 GHz", "single-photon source rate for direct transmission"}, QDREP_LINK(source_rate), 0, kInf},
  };
  return table;
}

#undef QDREP_PHYS
#undef QDREP_LINK

const Field* find_field(std::string_view key) {
  for (const auto& f : fields()) {
    if (f.info.key == key) return &f;
  }
  return nullptr;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string format_value(const Field& f, double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  if (f.info.dimension != D::kDimensionless && f.info.dimension != D::kInteger) {
    os << " (" << dimension_name(f.info.dimension) << ", SI)";
  }
  return os.str();
}

/// Range and cross-field checks shared by build_parameters and validate.
std::vector<std::string> range_violations(const ParameterSet& s) {
  std::vector<std::string> out;
  for (const auto& f : fields()) {
    if (!f.stored) continue;
    const double v = f.get(s);
    if (!std::isfinite(v) || v < f.lo || v > f.hi) {
      std::ostringstream os;
      os << f.info.key << " = " << format_value(f, v) << " is out of range [" << f.lo << ", "
         << f.hi << "]";
      out.push_back(os.str());
    }
  }
  const auto& p = s.physical;
  const double expected_fwhm = p.gamma() + 2.0 * p.gamma_star;
  if (std::abs(expected_fwhm - p.zpl_fwhm) > 1e-9 * std::max(1.0, p.zpl_fwhm)) {
    std::ostringstream os;
    os << "Gamma = " << p.zpl_fwhm << " rad/s does not equal gamma_r + gamma_nr + 2*gamma_star = "
       << expected_fwhm << " rad/s";
    out.push_back(os.str());
  }
  if (p.kappa <= 0.0) out.emplace_back("kappa must be positive");
  if (s.link.attenuation_length <= 0.0) out.emplace_back("L_att must be positive");
  if (s.link.fiber_speed <= 0.0) out.emplace_back("c_fiber must be positive");
  if (s.link.total_length <= 0.0) out.emplace_back("L_total must be positive (L_0 = L_total / 2^n_nest > 0)");
  return out;
}

}  // namespace

std::span<const KeyInfo> config_keys() {
  static const std::vector<KeyInfo> keys = [] {
    std::vector<KeyInfo> k;
    for (const auto& f : fields()) k.push_back(f.info);
    return k;
  }();
  return keys;
}

std::vector<Assignment> parse_config_text(std::string_view text, std::string_view source) {
  std::vector<Assignment> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;

    // '#' starts a comment unless it sits inside a quoted value.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    if (eq == std::string_view::npos) {
      throw ConfigError(where + ": expected 'key = value', got '" + std::string(line) + "'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError(where + ": empty key or value");
    }
    out.push_back({std::string(key), std::string(value), where});
  }
  return out;
}

Assignment parse_override(std::string_view text) {
  const std::size_t eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("--param expects key=value, got '" + std::string(text) + "'");
  }
  const std::string_view key = trim(text.substr(0, eq));
  const std::string_view value = trim(text.substr(eq + 1));
  if (key.empty() || value.empty()) {
    throw ConfigError("--param expects key=value, got '" + std::string(text) + "'");
  }
  return {std::string(key), std::string(value), "--param"};
}

ParameterSet build_parameters(std::span<const Assignment> assignments) {
  ParameterSet s;
  std::set<std::string, std::less<>> explicit_keys;
  double sd_fwhm = 0.0;

  for (const auto& f : fields()) {
    if (f.info.default_text.empty()) continue;
    const double v = parse_quantity(f.info.default_text, f.info.dimension);
    if (f.stored) {
      f.set(s, v);
      s.provenance[std::string(f.info.key)] =
          "default " + std::string(f.info.default_text) + ": " + std::string(f.info.description);
    } else {
      sd_fwhm = v;
    }
  }

  for (const auto& a : assignments) {
    const Field* f = find_field(a.key);
    if (f == nullptr) {
      throw ConfigError(a.source + ": unknown key '" + a.key + "'");
    }
    double v = 0.0;
    try {
      v = parse_quantity(a.value, f->info.dimension);
    } catch (const ConfigError& e) {
      throw ConfigError(a.source + ": " + a.key + ": " + e.what());
    }
    if (!std::isfinite(v) || v < f->lo || v > f->hi) {
      std::ostringstream os;
      os << a.source << ": " << a.key << " = " << a.value << " is out of range [" << f->lo << ", "
         << f->hi << "]";
      throw ConfigError(os.str());
    }
    explicit_keys.insert(a.key);
    if (f->stored) {
      f->set(s, v);
      s.provenance[a.key] = a.source;
    } else {
      sd_fwhm = v;
    }
  }

  auto is_set = [&](std::string_view k) { return explicit_keys.contains(k); };
  auto& p = s.physical;
  auto& l = s.link;

  if (is_set("sd_fwhm") && is_set("sigma_sd")) {
    throw ConfigError("sd_fwhm and sigma_sd both given; specify the spectral diffusion once");
  }
  if (!is_set("sigma_sd")) {
    p.sigma_sd = fwhm_to_sigma(sd_fwhm);
    s.provenance["sigma_sd"] = "derived from sd_fwhm = " + std::to_string(sd_fwhm) + " rad/s";
  }
  if (!is_set("gamma_star")) {
    p.gamma_star = 0.5 * (p.zpl_fwhm - p.gamma());
    s.provenance["gamma_star"] = "derived: (Gamma - gamma_r - gamma_nr) / 2";
  } else if (!is_set("Gamma")) {
    p.zpl_fwhm = p.gamma() + 2.0 * p.gamma_star;
    s.provenance["Gamma"] = "derived: gamma_r + gamma_nr + 2 gamma_star";
  }
  if (!is_set("g_cav")) {
    p.g_cav = 0.1 * p.kappa;
    s.provenance["g_cav"] = "derived: 0.1 * kappa";
  }
  if (!is_set("omega_Z_nuclear")) {
    p.omega_z_nuclear = kArsenicGyro * p.b_field;
    s.provenance["omega_Z_nuclear"] = "derived: 2pi * 7.22 MHz/T * B_x";
  }
  if (!is_set("eta_s")) {
    l.eta_s = l.p_emit;
    s.provenance["eta_s"] = "derived: eta_s = p_emit";
  }

  const auto problems = range_violations(s);
  if (!problems.empty()) {
    std::string msg = "invalid parameters:";
    for (const auto& v : problems) msg += "\n  " + v;
    throw ConfigError(msg);
  }
  return s;
}

ParameterSet default_parameters() { return build_parameters({}); }

ParameterSet load_config(const std::filesystem::path& path, std::span<const Assignment> overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  auto assignments = parse_config_text(buf.str(), path.string());
  assignments.insert(assignments.end(), overrides.begin(), overrides.end());
  return build_parameters(assignments);
}

std::string serialize(const ParameterSet& params) {
  std::ostringstream os;
  os << "# qdrep parameter set (base SI units; angular rates in rad/s)\n";
  for (const auto& f : fields()) {
    if (!f.stored) continue;
    os << f.info.key << " = \"" << format_quantity(f.get(params), f.info.dimension) << "\"\n";
  }
  return os.str();
}

double cooperativity(const PhysicalParams& p) {
  return p.gamma() > 0.0 ? p.purcell_resonant * p.gamma_r / p.gamma() : 0.0;
}

ValidationReport validate(const ParameterSet& params) {
  ValidationReport report;
  report.violations = range_violations(params);

  const auto& p = params.physical;
  report.cooperativity = cooperativity(p);
  if (p.kappa > 0.0 && p.gamma() > 0.0) {
    report.cooperativity_coupling = 4.0 * p.g_cav * p.g_cav / (p.kappa * p.gamma());
  }
  std::ostringstream os;
  os << "cooperativity C = F_res * gamma_r / gamma = " << report.cooperativity
     << " (used by the gate model)";
  report.notes.push_back(os.str());
  os.str("");
  os << "4 g^2 / (kappa gamma) from g_cav, kappa = " << report.cooperativity_coupling
     << " (informational; g/kappa = " << (p.kappa > 0 ? p.g_cav / p.kappa : 0.0) << ")";
  report.notes.push_back(os.str());
  return report;
}

}  // namespace qdrep
