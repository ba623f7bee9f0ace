#include "qdrep/qsim/linalg.hpp"

#include <stdexcept>

namespace qdrep::qsim {

Propagator::Propagator(const Matrix& hamiltonian) {
  if (hamiltonian.rows() != hamiltonian.cols()) {
    throw std::invalid_argument("Propagator: Hamiltonian must be square");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hamiltonian);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("Propagator: eigendecomposition failed");
  }
  energies_ = solver.eigenvalues();
  vectors_ = solver.eigenvectors();
}

Matrix Propagator::at(double t) const {
  Vector phases(energies_.size());
  for (Eigen::Index i = 0; i < energies_.size(); ++i) {
    phases[i] = std::polar(1.0, -energies_[i] * t);
  }
  return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

Vector Propagator::apply(const Vector& state, double t) const {
  Vector c = vectors_.adjoint() * state;
  for (Eigen::Index i = 0; i < energies_.size(); ++i) c[i] *= std::polar(1.0, -energies_[i] * t);
  return vectors_ * c;
}

bool is_hermitian(const Matrix& m, double tol) {
  return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace qdrep::qsim
