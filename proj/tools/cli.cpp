#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include "qdrep/fidelity.hpp"
#include "qdrep/mcsim.hpp"
#include "qdrep/qsim/density.hpp"
#include "qdrep/qsim/swap.hpp"
#include "qdrep/rates.hpp"
#include "qdrep/units.hpp"
#include "qdrep/validation.hpp"

namespace qdrep::cli {
namespace {

const KeyInfo* find_key(std::string_view key) {
  for (const auto& k : config_keys()) {
    if (k.key == key) return &k;
  }
  return nullptr;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    const std::size_t pos = s.find(sep);
    out.push_back(s.substr(0, pos));
    if (pos == std::string_view::npos) return out;
    s.remove_prefix(pos + 1);
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

/// Options shared by every subcommand.
struct Globals {
  std::string config;
  std::vector<std::string> params;
  std::string out;
  std::uint64_t seed = 20240611;
  std::uint64_t trials = 100000;
  bool seed_given = false;
  bool trials_given = false;
};

ParameterSet resolve(const Globals& g, std::span<const Assignment> extra = {}) {
  std::vector<Assignment> overrides;
  for (const auto& p : g.params) overrides.push_back(parse_override(p));
  overrides.insert(overrides.end(), extra.begin(), extra.end());
  if (g.config.empty()) return build_parameters(overrides);
  return load_config(g.config, overrides);
}

/// Writes the table to --out (plus a metadata companion) or to `out`.
void emit(const Globals& g, std::string_view command, std::span<const std::string> argv,
          const ParameterSet& params, const Table& table, std::ostream& out) {
  if (g.out.empty()) {
    write_csv(out, table);
    return;
  }
  std::ofstream file(g.out);
  if (!file) throw UsageError("cannot open output file '" + g.out + "'");
  write_csv(file, table);
  std::ofstream meta(g.out + ".meta.json");
  if (!meta) throw UsageError("cannot open metadata file '" + g.out + ".meta.json'");
  meta << metadata_json(command, argv, params, table, g.seed) << "\n";
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (auto item : split(text, ',')) {
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    try {
      out.push_back(parse_quantity(item, Dimension::kDimensionless));
    } catch (const ConfigError&) {
      throw UsageError("cannot parse list value '" + std::string(item) + "'");
    }
  }
  return out;
}

int cmd_rates(const Globals& g, const std::string& sweep_text, std::span<const std::string> argv,
              std::ostream& out, std::ostream& err) {
  const SweepSpec sweep = parse_sweep(sweep_text);
  if (sweep.variable != "L_total") throw UsageError("rates: the sweep variable must be L_total");
  const ParameterSet params = resolve(g, sweep.fixed);
  const Table table = rates_table(params, sweep);
  emit(g, "rates", argv, params, table, out);

  LinkParams curve_b = params.link;
  curve_b.p_emit = 0.72 / curve_b.eta_c;
  curve_b.eta_s = curve_b.p_emit;
  try {
    err << "crossover (curve B vs direct): "
        << repeater_crossover_length(curve_b, 1e3, 5000e3) * 1e-3 << " km\n";
  } catch (const std::domain_error&) {
    err << "crossover (curve B vs direct): none in [1, 5000] km\n";
  }
  return kOk;
}

int cmd_contour(const Globals& g, ContourOptions options, std::span<const std::string> argv,
                std::ostream& out, std::ostream& err) {
  const ParameterSet params = resolve(g);
  const ContourOutput result = contour_table(params, options);
  for (const auto& w : result.warnings) err << "warning: " << w << "\n";
  if (!result.warnings.empty() && !options.force) {
    err << "error: " << result.warnings.size()
        << " grid points fall outside the first-order regime; rerun with --force to compose anyway\n";
    return kValidationFailure;
  }
  emit(g, "contour", argv, params, result.table, out);
  return kOk;
}

int cmd_validate(const Globals& g, std::ostream& out) {
  const ParameterSet params = resolve(g);
  const ValidationReport report = validate(params);
  for (const auto& v : report.violations) out << "violation: " << v << "\n";
  for (const auto& n : report.notes) out << "note: " << n << "\n";

  const FidelityBudget budget = compute_budget(params);
  out << std::setprecision(6) << "budget: F_ent=" << budget.entanglement << " F_transfer=" << budget.transfer
      << " F_gate=" << budget.gate << " F_readout=" << budget.readout << " F_total(n=" << budget.nesting_level
      << ")=" << budget.total << "\n";
  for (const auto& w : budget.warnings) out << "warning: " << w << "\n";

  AcceptanceOptions options;
  options.seed = g.seed;
  options.mc_trials = g.trials;
  const auto results = run_acceptance(params, options);
  int failed = report.ok() ? 0 : 1;
  for (const auto& r : results) {
    out << r.summary() << "\n";
    failed += r.pass() ? 0 : 1;
  }
  out << (failed == 0 ? "validation passed" : "validation FAILED") << "\n";
  return failed == 0 ? kOk : kValidationFailure;
}

struct McOptions {
  double p0 = 0.0;
  double p_swap = 0.0;
  double slot = 0.0;
  double cutoff = 0.0;
  double tolerance = 0.15;
  double threshold = 1.0;
  int bins = 0;
};

int cmd_mc(const Globals& g, const McOptions& mo, std::span<const std::string> argv, std::ostream& out) {
  const ParameterSet params = resolve(g);
  ProtocolConfig cfg = protocol_from_params(params);
  if (mo.p0 > 0.0) cfg.p0 = mo.p0;
  if (mo.p_swap > 0.0) cfg.p_swap = mo.p_swap;
  if (mo.slot > 0.0) cfg.slot_time = mo.slot;
  if (mo.cutoff > 0.0) cfg.memory_cutoff = mo.cutoff;
  cfg.trials = g.trials;
  cfg.seed = g.seed;
  try {
    cfg.check();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("mc: ") + e.what());
  }

  const auto records = simulate_trials(cfg);
  const TimingStats stats = summarize(records, cfg.seed);
  const int n = cfg.nesting_level;
  const double analytic = std::pow(1.5, n) * cfg.slot_time / (cfg.p0 * std::pow(cfg.p_swap, n));
  const ComparisonReport rep = compare_with_analytic(stats, analytic, mo.tolerance);

  if (!g.out.empty()) {
    std::ofstream file(g.out);
    if (!file) throw UsageError("cannot open output file '" + g.out + "'");
    write_trials_csv(file, records);
    Table shape;
    shape.columns = {"trial", "total_time_s", "swap_failures", "max_storage_s"};
    shape.rows.resize(records.size());
    std::ofstream meta(g.out + ".meta.json");
    meta << metadata_json("mc", argv, params, shape, g.seed) << "\n";
  }

  out << std::setprecision(6);
  out << "n=" << n << " p0=" << cfg.p0 << " p_swap=" << cfg.p_swap << " slot=" << cfg.slot_time
      << " s trials=" << stats.trials << " seed=" << stats.seed << "\n";
  out << "mc mean=" << stats.mean << " s stderr=" << stats.stderr_mean << " 95% CI=[" << rep.ci_low << ", "
      << rep.ci_high << "]\n";
  out << "percentiles p50=" << stats.p50 << " p90=" << stats.p90 << " p99=" << stats.p99 << " s\n";
  out << "analytic=" << analytic << " s ratio=" << rep.ratio << " tolerance=" << mo.tolerance
      << (rep.pass ? " PASS" : " FAIL") << "\n";
  out << "success fraction=" << stats.success_fraction << " time per success=" << stats.mean_time_per_success
      << " s\n";

  const Histogram h = storage_time_histogram(records, std::max(mo.bins, 1), mo.threshold);
  out << "max storage > " << mo.threshold << " s in " << h.fraction_above_threshold * 100.0 << "% of trials\n";
  if (mo.bins > 0) {
    out << "storage histogram (bin_low_s, bin_high_s, count):\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
      out << "  " << fmt(h.edges[i]) << ", " << fmt(h.edges[i + 1]) << ", " << h.counts[i] << "\n";
    }
  }
  return rep.pass ? kOk : kValidationFailure;
}

int cmd_qsim(const Globals& g, std::ostream& out) {
  const ParameterSet params = resolve(g);
  const CriterionResult oracle = criterion_quantum_oracle(params);
  out << std::setprecision(6);
  for (const auto& c : oracle.checks) {
    out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " = " << c.value << "\n";
  }

  // Chain oracle against the multiplicative composition for this parameter set.
  const FidelityBudget b = compute_budget(params);
  const qsim::ChainComponents comp{b.entanglement, b.transfer, b.gate, b.readout, b.electron_init};
  for (int links : {2, 4}) {
    const double oracle_f = qsim::chain_fidelity_oracle(links, comp);
    const double formula = overall_fidelity(b, links == 2 ? 1 : 2);
    out << "config chain l=" << links << ": oracle=" << oracle_f << " formula=" << formula
        << " |diff|=" << std::abs(oracle_f - formula) << "\n";
  }
  return oracle.pass() ? kOk : kValidationFailure;
}

}  // namespace

std::vector<double> SweepSpec::values() const {
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i) {
    const double f = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    v[i] = scale == Scale::kLog ? start * std::pow(stop / start, f) : start + f * (stop - start);
  }
  v.back() = stop;
  return v;
}

SweepSpec parse_sweep(std::string_view text) {
  const std::size_t eq = text.find('=');
  if (eq == std::string_view::npos) throw UsageError("sweep must look like key=start:stop:points[:scale]");
  SweepSpec s;
  s.variable = std::string(text.substr(0, eq));
  const KeyInfo* info = find_key(s.variable);
  if (info == nullptr) throw UsageError("sweep: unknown parameter '" + s.variable + "'");

  const auto parts = split(text.substr(eq + 1), ':');
  if (parts.size() < 3 || parts.size() > 4) throw UsageError("sweep must look like key=start:stop:points[:scale]");
  try {
    s.start = parse_quantity(parts[0], info->dimension);
    s.stop = parse_quantity(parts[1], info->dimension);
    const double pts = parse_quantity(parts[2], Dimension::kInteger);
    if (pts < 2 || pts > 1e6) throw UsageError("sweep: points must be in [2, 1e6]");
    s.points = static_cast<int>(pts);
  } catch (const ConfigError& e) {
    throw UsageError(std::string("sweep: ") + e.what());
  }
  if (parts.size() == 4) {
    if (parts[3] == "log") {
      s.scale = SweepSpec::Scale::kLog;
    } else if (parts[3] != "linear") {
      throw UsageError("sweep: scale must be linear or log");
    }
  }
  if (!(s.start < s.stop)) throw UsageError("sweep: start must be below stop");
  if (s.scale == SweepSpec::Scale::kLog && s.start <= 0.0) throw UsageError("sweep: log scale needs start > 0");
  return s;
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? ", " : "") << table.columns[i];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? ", " : "") << fmt(row[i]);
    out << "\n";
  }
}

Table rates_table(const ParameterSet& params, const SweepSpec& sweep) {
  Table t;
  t.columns = {"L_km", "rate_direct", "rate_B", "rate_C", "rate_D", "rate_2plus2"};
  const LinkParams& base = params.link;
  constexpr double kProducts[3] = {0.72, 0.5, 0.4};
  for (double length : sweep.values()) {
    std::vector<double> row{length * 1e-3,
                            direct_transmission_rate(length, base.source_rate, base.attenuation_length)};
    for (double product : kProducts) {
      LinkParams link = base;
      link.total_length = length;
      link.p_emit = product / link.eta_c;
      link.eta_s = link.p_emit;
      row.push_back(mean_time_parallel(link).rate);
    }
    LinkParams pair = base;
    pair.total_length = length;
    row.push_back(mean_time_two_plus_two(pair).rate);
    t.rows.push_back(std::move(row));
  }
  return t;
}

ContourOutput contour_table(const ParameterSet& params, const ContourOptions& options) {
  if (options.purcell.empty() || options.polarization.empty()) throw UsageError("contour: empty grid");
  for (double p : options.polarization) {
    if (p < 0.80 || p > 1.0) throw UsageError("contour: polarization must lie in [0.80, 1]");
  }
  for (double f : options.purcell) {
    if (!(f > 0.0)) throw UsageError("contour: Purcell factors must be positive");
  }
  ContourOutput o;
  o.table.columns = {"F_p", "polarization", "F_ent", "F_transfer", "F_gate", "F_readout", "F_total"};
  const auto points = fidelity_contour(params, options.purcell, options.polarization, options.workers);
  for (const auto& pt : points) {
    const auto& b = pt.budget;
    o.table.rows.push_back({pt.purcell, pt.polarization, b.entanglement, b.transfer, b.gate, b.readout, b.total});
    for (const auto& w : b.warnings) {
      std::ostringstream os;
      os << "(F_p=" << pt.purcell << ", pol=" << pt.polarization << ") " << w;
      o.warnings.push_back(os.str());
    }
  }
  return o;
}

std::string metadata_json(std::string_view command, std::span<const std::string> argv,
                          const ParameterSet& params, const Table& table, unsigned long long seed) {
  nlohmann::ordered_json j;
  j["tool"] = "qdrep";
  j["command"] = command;
  j["argv"] = std::vector<std::string>(argv.begin(), argv.end());
  j["seed"] = seed;
  j["columns"] = table.columns;
  j["rows"] = table.rows.size();
  j["number_format"] = "%.6e";
  nlohmann::ordered_json values;
  for (const auto& a : parse_config_text(serialize(params), "resolved")) {
    std::string v = a.value;
    if (v.size() >= 2 && v.front() == '"') v = v.substr(1, v.size() - 2);
    values[a.key] = v;
  }
  j["parameters"] = values;
  j["provenance"] = params.provenance;
  return j.dump(2);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum-dot repeater rate, fidelity and timing toolkit", "qdrep"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "qdrep 0.1.0");

  Globals g;
  app.add_option("--config", g.config, "parameter file (key = value lines)")->check(CLI::ExistingFile);
  app.add_option("--param", g.params, "override one parameter, key=value (repeatable)");
  app.add_option("--out", g.out, "write CSV here (a .meta.json companion is written next to it)");
  app.add_option("--seed", g.seed, "Monte Carlo seed");
  app.add_option("--trials", g.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);

  auto* rates = app.add_subcommand("rates", "entanglement rate versus distance (CSV)");
  std::string sweep_text = "L_total=0 km:2000 km:41";
  rates->add_option("--sweep", sweep_text, "key=start:stop:points[:linear|log]")->capture_default_str();

  auto* contour = app.add_subcommand("contour", "overall fidelity over Purcell factor and polarization (CSV)");
  ContourOptions copt;
  std::string fp_list;
  std::string pol_list;
  contour->add_option("--fp", fp_list, "comma-separated Purcell factors");
  contour->add_option("--pol", pol_list, "comma-separated polarizations in [0.80, 1]");
  contour->add_flag("--force", copt.force, "compose points outside the first-order regime");

  auto* validate_cmd = app.add_subcommand("validate", "run the acceptance suite");

  auto* mc = app.add_subcommand("mc", "Monte Carlo delivery time versus the analytic formula");
  McOptions mo;
  mc->add_option("--p0", mo.p0, "override the elementary-link success probability");
  mc->add_option("--p-swap", mo.p_swap, "override the swap success probability");
  mc->add_option("--slot", mo.slot, "override the attempt duration, s");
  mc->add_option("--cutoff", mo.cutoff, "memory cutoff, s (default unlimited)");
  mc->add_option("--tolerance", mo.tolerance, "relative tolerance of the comparison")->capture_default_str();
  mc->add_option("--storage-threshold", mo.threshold, "report storage beyond this, s")->capture_default_str();
  mc->add_option("--histogram", mo.bins, "print a storage-time histogram with this many bins");

  auto* qsim_cmd = app.add_subcommand("qsim", "exact quantum checks of transfer, CZ and swapping");

  for (auto* sub : {rates, contour, validate_cmd, mc, qsim_cmd}) sub->fallthrough();

  std::vector<std::string> args(argv, argv + argc);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*rates) return cmd_rates(g, sweep_text, args, out, err);
    if (*contour) {
      if (!fp_list.empty()) copt.purcell = parse_list(fp_list);
      if (!pol_list.empty()) copt.polarization = parse_list(pol_list);
      return cmd_contour(g, copt, args, out, err);
    }
    if (*validate_cmd) return cmd_validate(g, out);
    if (*mc) return cmd_mc(g, mo, args, out);
    if (*qsim_cmd) return cmd_qsim(g, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  }
  return kUsageError;
}

}  // namespace qdrep::cli
