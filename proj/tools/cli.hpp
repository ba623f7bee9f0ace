#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qdrep/params.hpp"

namespace qdrep::cli {

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kUsageError = 2, kConfigError = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A one-parameter sweep, written on the command line as
/// `key=start:stop:points[:linear|log]`, e.g. `L_total=0 km:2000 km:41`.
struct SweepSpec {
  enum class Scale { kLinear, kLog };

  std::string variable;
  double start = 0.0;  ///< base SI units
  double stop = 0.0;
  int points = 2;
  Scale scale = Scale::kLinear;
  std::vector<Assignment> fixed;

  std::vector<double> values() const;
};

SweepSpec parse_sweep(std::string_view text);

/// Plot-ready numeric table.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Header joined by ", " and every value printed as %.6e.
void write_csv(std::ostream& out, const Table& table);

/// Entanglement rate of each scheme versus total distance. Curves B, C and
/// D use p * eta_c = 0.72, 0.5 and 0.4; the 2+2 column uses the set as is.
Table rates_table(const ParameterSet& params, const SweepSpec& sweep);

struct ContourOptions {
  std::vector<double> purcell{50, 100, 200, 300, 400, 500, 600, 700, 800, 900, 1000};
  std::vector<double> polarization{0.80, 0.85, 0.90, 0.95, 0.98, 0.99, 0.999};
  bool force = false;
  unsigned workers = 0;
};

struct ContourOutput {
  Table table;
  std::vector<std::string> warnings;  ///< per point, prefixed with its coordinates
};

ContourOutput contour_table(const ParameterSet& params, const ContourOptions& options);

/// JSON companion describing how a CSV was produced, including the full
/// resolved parameter set.
std::string metadata_json(std::string_view command, std::span<const std::string> argv,
                          const ParameterSet& params, const Table& table, unsigned long long seed);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qdrep::cli
