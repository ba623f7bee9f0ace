#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "qdrep/fidelity.hpp"
#include "qdrep/params.hpp"

namespace qdrep {
namespace {

constexpr double kTau = 2.0 * M_PI;

ParameterSet with(std::vector<Assignment> a) { return build_parameters(a); }

// Independent reference for the spectral-diffusion average: plain
// trapezoid rule on +-8 sigma for both emitters.
double trapezoid_entanglement(const PhysicalParams& p, int points) {
  const double s = p.sigma_sd;
  const double lo = -8.0 * s;
  const double h = 16.0 * s / (points - 1);
  auto rates = [&](double w) {
    const double fp = p.kappa * p.kappa / (4.0 * w * w + p.kappa * p.kappa) * p.purcell_resonant;
    const double g = p.gamma_r * (1.0 + fp) + p.gamma_nr;
    return std::pair{g, g + 2.0 * p.gamma_star};
  };
  std::vector<double> w(points);
  std::vector<double> weight(points);
  std::vector<std::pair<double, double>> r(points);
  for (int i = 0; i < points; ++i) {
    const double x = lo + i * h;
    w[i] = p.detuning + x;
    weight[i] = std::exp(-0.5 * x * x / (s * s)) / (s * std::sqrt(kTau)) * h * ((i == 0 || i == points - 1) ? 0.5 : 1.0);
    r[i] = rates(w[i]);
  }
  double acc = 0.0;
  for (int i = 0; i < points; ++i) {
    for (int j = 0; j < points; ++j) {
      const double sum = r[i].second + r[j].second;
      const double d = w[i] - w[j];
      acc += weight[i] * weight[j] * 0.5 * (1.0 + 4.0 * r[i].first * r[j].first / (sum * sum + 4.0 * d * d));
    }
  }
  return acc;
}

TEST(Purcell, DetuningSuppression) {
  EXPECT_NEAR(purcell_at_detuning(500, kTau * 100e9, kTau * 275e9), 16.0, 0.1);
  EXPECT_NEAR(purcell_at_detuning(200, kTau * 100e9, kTau * 200e9), 11.8, 0.2);
  EXPECT_DOUBLE_EQ(purcell_at_detuning(500, 1.0, 0.0), 500.0);
  EXPECT_DOUBLE_EQ(purcell_at_detuning(500, 2.0, 1.0), 250.0);
  EXPECT_THROW(purcell_at_detuning(500, 0.0, 1.0), std::invalid_argument);
}

TEST(BarrettKok, Limits) {
  // Lifetime-limited identical emitters are perfect; pure dephasing and
  // detuning both push towards the classical 1/2.
  EXPECT_DOUBLE_EQ(barrett_kok_fidelity(1.0, 1.0, 1.0, 1.0, 0.0), 1.0);
  EXPECT_LT(barrett_kok_fidelity(1.0, 1.0, 3.0, 3.0, 0.0), 1.0);
  EXPECT_NEAR(barrett_kok_fidelity(1.0, 1.0, 1.0, 1.0, 1e6), 0.5, 1e-9);
  const auto r = enhanced_rates(2.0, 0.5, 0.25, 3.0);
  EXPECT_DOUBLE_EQ(r.gamma_prime, 8.5);
  EXPECT_DOUBLE_EQ(r.Gamma_prime, 9.0);
}

TEST(Entanglement, ReferenceCases) {
  const auto a = entanglement_fidelity(default_parameters().physical);
  const auto b = entanglement_fidelity(with({{"F_res", "200", "t"}, {"detuning", "2pi*200 GHz", "t"}}).physical);
  EXPECT_NEAR(a.fidelity, 0.995, 0.002);
  EXPECT_NEAR(b.fidelity, 0.993, 0.002);
  EXPECT_LT(a.last_change, 1e-6 * a.fidelity);
  EXPECT_GE(a.nodes, 42);
}

TEST(Entanglement, AgreesWithTrapezoidReference) {
  for (double fwhm_mhz : {100.0, 500.0, 2000.0}) {
    const auto s = with({{"sd_fwhm", "2pi*" + std::to_string(fwhm_mhz) + " MHz", "t"}});
    const double gh = entanglement_fidelity(s.physical).fidelity;
    const double tr = trapezoid_entanglement(s.physical, 401);
    EXPECT_NEAR(gh, tr, 1e-8) << fwhm_mhz;
  }
}

TEST(Entanglement, NoDiffusionGivesNominal) {
  const auto s = with({{"sigma_sd", "0 Hz", "t"}});
  const auto& p = s.physical;
  const auto r = enhanced_rates(p.gamma_r, p.gamma_nr, p.gamma_star,
                                purcell_at_detuning(p.purcell_resonant, p.kappa, p.detuning));
  EXPECT_NEAR(entanglement_fidelity(p).fidelity,
              barrett_kok_fidelity(r.gamma_prime, r.gamma_prime, r.Gamma_prime, r.Gamma_prime, 0.0), 1e-14);
}

TEST(Entanglement, MoreDiffusionLowersFidelity) {
  double prev = 1.0;
  for (int mhz : {0, 100, 300, 1000, 3000}) {
    const auto s = with({{"sd_fwhm", "2pi*" + std::to_string(mhz) + " MHz", "t"}});
    const double f = entanglement_fidelity(s.physical).fidelity;
    EXPECT_LT(f, prev + 1e-15);
    prev = f;
  }
}

TEST(Entanglement, NonConvergenceIsReported) {
  const auto s = with({{"sd_fwhm", "2pi*500 GHz", "t"}, {"detuning", "0 Hz", "t"}});
  QuadratureOptions tight{3, 6, 1e-15};
  EXPECT_THROW(entanglement_fidelity(s.physical, tight), QuadratureNotConverged);
}

TEST(Transfer, Components) {
  EXPECT_NEAR(quadrupolar_factor(5e4, 2, 330e-9), 0.99565, 1e-5);
  EXPECT_DOUBLE_EQ(quadrupolar_factor(5e4, 1, 0.0), 1.0);
  EXPECT_NEAR(std::log(quadrupolar_factor(5e4, 2, 330e-9)) / std::log(quadrupolar_factor(5e4, 1, 330e-9)), 16.0,
              1e-9);
  EXPECT_DOUBLE_EQ(nuclear_init_fidelity(0.95), 0.998);
  EXPECT_DOUBLE_EQ(nuclear_init_fidelity(0.80), 0.977);
  EXPECT_DOUBLE_EQ(nuclear_init_fidelity(1.0), 1.0);
  EXPECT_GT(nuclear_init_fidelity(0.999), 0.998);
  EXPECT_LT(nuclear_init_fidelity(0.999), 1.0);
  EXPECT_THROW(nuclear_init_fidelity(0.79), std::domain_error);
  const double f95 = transfer_fidelity(0.99996, 0.998, quadrupolar_factor(5e4, 2, 330e-9));
  const double f80 = transfer_fidelity(0.99996, 0.977, quadrupolar_factor(5e4, 2, 330e-9));
  EXPECT_NEAR(f95, 0.993, 0.002);
  EXPECT_NEAR(f80, 0.973, 0.002);
}

TEST(Transfer, PulseSpacing) {
  const double wz = kTau * 7.22e6 * 6.6;
  EXPECT_DOUBLE_EQ(pulse_spacing(wz, 1), 3.0 * M_PI / (4.0 * wz));
  EXPECT_DOUBLE_EQ(pulse_spacing(wz, 2), pulse_spacing(wz, 1) / 2.0);
  EXPECT_THROW(pulse_spacing(wz, 3), std::invalid_argument);
}

TEST(Gate, ReferenceCasesAndTerms) {
  const auto g500 = gate_fidelity(default_parameters().physical);
  const auto g200 = gate_fidelity(with({{"F_res", "200", "t"}}).physical);
  EXPECT_NEAR(g500.fidelity, 0.995, 0.001);
  EXPECT_NEAR(g200.fidelity, 0.986, 0.001);
  EXPECT_TRUE(g500.warnings.empty());

  // Hand evaluation of the same expansion.
  const double gamma = kTau * 0.59e9;
  const double c = 500.0;
  const double x2 = 0.04;
  const double tg = 8.0 * M_PI * std::sqrt(2.0 * std::log(2.0)) / (kTau * 2.4e9);
  const double expected = 1.0 - 5.0 / (2.0 * c) - 1e4 * tg -
                          (std::pow(kTau * 0.5e9, 2) + std::pow(kTau * 2.4e9, 2)) / (4.0 * gamma * gamma * c * c) *
                              (11.0 - 20.0 * x2 + 12.0 * x2 * x2);
  EXPECT_NEAR(g500.fidelity, expected, 1e-12);
  EXPECT_NEAR(g500.gate_time, 2e-9, 0.05e-9);
}

TEST(Gate, DetuningTermIsSymmetric) {
  const auto same = gate_fidelity(with({{"delta_eps1", "2pi*1 GHz", "t"}, {"delta_eps2", "2pi*1 GHz", "t"}}).physical);
  EXPECT_EQ(same.detuning_term, 0.0);
  const auto a = gate_fidelity(with({{"delta_eps1", "2pi*1 GHz", "t"}}).physical);
  const auto b = gate_fidelity(with({{"delta_eps2", "2pi*1 GHz", "t"}}).physical);
  EXPECT_GT(a.detuning_term, 0.0);
  EXPECT_DOUBLE_EQ(a.detuning_term, b.detuning_term);
}

TEST(Gate, LowCooperativityWarns) {
  const auto g = gate_fidelity(with({{"F_res", "20", "t"}}).physical);
  EXPECT_FALSE(g.warnings.empty());
  EXPECT_NE(g.warnings.front().find("out of regime"), std::string::npos);
}

TEST(Readout, ForwardAndInverse) {
  const auto s = default_parameters();
  const auto& p = s.physical;
  const double gp = readout_gamma_prime(p);
  EXPECT_NEAR(gp, kTau * 0.59e9 * 501.0, 1.0);
  const double f = readout_fidelity(p.readout_time, p.dark_count_rate, 0.9, 0.9, kTau * 1e9, gp);
  EXPECT_NEAR(f, 0.99983, 0.00002);

  // Bisection reference for the inversion.
  double lo = 0.0;
  double hi = kTau * 10e9;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (readout_fidelity(p.readout_time, p.dark_count_rate, 0.9, 0.9, mid, gp) < 0.99983 ? lo : hi) = mid;
  }
  const double omega = readout_drive_for(0.99983, p.readout_time, p.dark_count_rate, 0.9, 0.9, gp);
  EXPECT_NEAR(omega, 0.5 * (lo + hi), 1e-6 * omega);
  EXPECT_NEAR(omega / (kTau * 1e9), 1.0, 0.05);
  EXPECT_THROW(readout_drive_for(1.0, p.readout_time, p.dark_count_rate, 0.9, 0.9, gp), std::domain_error);
}

TEST(Readout, StrongDriveWarns) {
  const auto b = compute_budget(with({{"Omega_readout", "2pi*1000 GHz", "t"}}));
  bool found = false;
  for (const auto& w : b.warnings) found = found || w.find("gamma'/5") != std::string::npos;
  EXPECT_TRUE(found);
}

TEST(Splittings, ReferenceField) {
  const auto s = zeeman_splittings(6.6, -0.076, 1.309, 0.80, 31e9);
  EXPECT_NEAR(s.ground * 1e-9, 32.0, 0.5);
  EXPECT_NEAR(s.excited * 1e-9, 146.0, 1.0);
  EXPECT_DOUBLE_EQ(s.overhauser, 0.8 * 31e9);
  const auto zero = zeeman_splittings(0.0, -0.076, 1.309, 0.0, 31e9);
  EXPECT_EQ(zero.ground, 0.0);
}

TEST(Overall, CompositionFormula) {
  // Direct evaluation of the multiplicative composition for l = 8.
  const double l = 8.0;
  const double expected = std::pow(0.99996, 2 * l) * std::pow(0.99983, 2 * (l - 1)) *
                          std::pow(0.995 * 0.99397 * 0.99397, l) * std::pow(0.9948, l - 1);
  const double f = overall_fidelity(0.99996, 0.99983, 0.995, 0.99397, 0.9948, 3);
  EXPECT_NEAR(f, expected, 1e-14);
  EXPECT_NEAR(f, 0.838, 0.001);
  EXPECT_NEAR(f, 0.831, 0.01);
  EXPECT_DOUBLE_EQ(overall_fidelity(1, 1, 1, 1, 1, 5), 1.0);
  EXPECT_DOUBLE_EQ(overall_fidelity(0.9, 0.5, 1, 1, 0.5, 0), 0.81);
  EXPECT_THROW(overall_fidelity(1, 1, 1, 1, 1, -1), std::invalid_argument);
}

TEST(Contour, AnchorsAndOrdering) {
  const auto params = default_parameters();
  const std::vector<double> fp{200, 500};
  const std::vector<double> pol{0.80, 0.95, 0.999};
  const auto grid = fidelity_contour(params, fp, pol, 3);
  ASSERT_EQ(grid.size(), 6u);
  EXPECT_EQ(grid[1].purcell, 200);
  EXPECT_EQ(grid[1].polarization, 0.95);
  EXPECT_NEAR(grid[1].budget.total, 0.734, 0.01);
  EXPECT_NEAR(grid[4].budget.total, 0.831, 0.01);
  EXPECT_NEAR(grid[3].budget.total, 0.596, 0.01);
  EXPECT_NEAR(grid[0].budget.total, 0.526, 0.01);
  EXPECT_NEAR(grid[5].budget.total, 0.858, 0.01);

  const auto serial = fidelity_contour(params, fp, pol, 1);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(grid[i].budget.total, serial[i].budget.total);
}

TEST(Contour, RejectsPolarizationBelowTable) {
  const std::vector<double> fp{500};
  const std::vector<double> pol{0.5};
  EXPECT_THROW(fidelity_contour(default_parameters(), fp, pol, 2), std::domain_error);
}

}  // namespace
}  // namespace qdrep
