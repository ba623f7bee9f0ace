#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qdrep/params.hpp"

namespace qdrep {

/// One numeric check inside an acceptance criterion.
struct CheckResult {
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<CheckResult> checks;

  bool pass() const;
  /// "[PASS] 3 state transfer: ..." one-line summary.
  std::string summary() const;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240611;
  std::uint64_t mc_trials = 100000;
  unsigned workers = 0;
};

/// Reference parameter sets built on top of `base`.
ParameterSet with_overrides(const ParameterSet& base, const std::vector<std::pair<std::string, std::string>>& kv);

CriterionResult criterion_purcell(const ParameterSet& base);
CriterionResult criterion_entanglement(const ParameterSet& base);
CriterionResult criterion_transfer(const ParameterSet& base);
CriterionResult criterion_gate(const ParameterSet& base);
CriterionResult criterion_readout(const ParameterSet& base);
CriterionResult criterion_splittings(const ParameterSet& base);
CriterionResult criterion_overall(const ParameterSet& base);
CriterionResult criterion_rates(const ParameterSet& base);
CriterionResult criterion_monte_carlo(const ParameterSet& base, const AcceptanceOptions& options);
CriterionResult criterion_quantum_oracle(const ParameterSet& base);

/// All ten criteria in order.
std::vector<CriterionResult> run_acceptance(const ParameterSet& base, const AcceptanceOptions& options = {});

}  // namespace qdrep
