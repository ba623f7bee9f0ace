#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qdrep::qsim {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// exp(-i H t) for a Hermitian H, from one cached eigendecomposition.
class Propagator {
 public:
  explicit Propagator(const Matrix& hamiltonian);

  Matrix at(double t) const;
  Vector apply(const Vector& state, double t) const;

  const Eigen::VectorXd& energies() const { return energies_; }

 private:
  Eigen::VectorXd energies_;
  Matrix vectors_;
};

bool is_hermitian(const Matrix& m, double tol = 1e-12);

}  // namespace qdrep::qsim
