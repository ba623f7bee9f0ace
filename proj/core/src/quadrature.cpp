#include "qdrep/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace qdrep {

QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");
  constexpr double kPiM4 = 0.7511255444649425;  // pi^(-1/4)
  constexpr int kMaxIter = 50;

  // Golub-Welsch: the nodes are the eigenvalues of the symmetric Jacobi
  // matrix of the Hermite recurrence. They seed Newton on the orthonormal
  // recurrence, which also yields weights with full relative accuracy even
  // where they underflow the eigenvector estimate.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 1));
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("gauss_hermite: eigenvalue solve failed");
  const Eigen::VectorXd& guess = solver.eigenvalues();  // ascending

  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double z = guess[i];
    double pp = 0.0;
    for (int it = 0; it < kMaxIter; ++it) {
      double p1 = kPiM4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double step = p1 / pp;
      z -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    x[i] = z;
    w[i] = 2.0 / (pp * pp);
  }
  // Enforce exact symmetry.
  for (int i = 0; i < n / 2; ++i) {
    const double z = 0.5 * (x[n - 1 - i] - x[i]);
    const double wi = 0.5 * (w[i] + w[n - 1 - i]);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = wi;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
  return {std::move(x), std::move(w)};
}

QuadratureRule gauss_hermite_normal(int n) {
  QuadratureRule rule = gauss_hermite(n);
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  for (auto& x : rule.nodes) x *= std::numbers::sqrt2;
  for (auto& w : rule.weights) w *= inv_sqrt_pi;
  return rule;
}

}  // namespace qdrep
