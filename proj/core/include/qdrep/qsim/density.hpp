#pragma once

#include <span>
#include <vector>

#include "qdrep/qsim/linalg.hpp"

namespace qdrep::qsim {

inline constexpr int kMaxQubits = 8;

/// Density matrix over up to eight qubits. Qubit q is bit q of the basis
/// index; |0> is spin down and |1> spin up.
class DensityMatrix {
 public:
  explicit DensityMatrix(int qubits);  ///< |0...0><0...0|

  static DensityMatrix from_pure(const Vector& psi);
  static DensityMatrix from_matrix(Matrix rho);

  int qubits() const { return qubits_; }
  Eigen::Index dimension() const { return rho_.rows(); }
  const Matrix& matrix() const { return rho_; }
  Matrix& matrix() { return rho_; }

  double trace() const;
  double min_eigenvalue() const;
  /// Hermitian, unit trace and positive semidefinite within `tol`.
  bool is_physical(double tol = 1e-10) const;

  /// this (x) other; the qubits of `other` follow this register's qubits.
  DensityMatrix tensor(const DensityMatrix& other) const;

 private:
  DensityMatrix(int qubits, Matrix rho) : qubits_(qubits), rho_(std::move(rho)) {}

  int qubits_;
  Matrix rho_;
};

enum class Bell { kPhiPlus, kPhiMinus, kPsiPlus, kPsiMinus };

Vector bell_state(Bell which);

Matrix hadamard();
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix cz_matrix();

/// Multiplies M from the left by U acting on `targets` (targets[0] is the
/// least significant bit of U's index).
Matrix apply_left(const Matrix& m, const Matrix& u, std::span<const int> targets);

void apply_unitary(DensityMatrix& rho, const Matrix& u, std::span<const int> targets);
void apply_unitary(DensityMatrix& rho, const Matrix& u, std::initializer_list<int> targets);

void apply_kraus(DensityMatrix& rho, std::span<const Matrix> kraus, std::span<const int> targets);

/// Kraus operators of the two-qubit depolarizing channel
/// rho -> (1 - p) rho + p Tr_ab(rho) (x) I/4.
std::vector<Matrix> depolarizing_kraus_2q(double p);

/// Depolarizing strength whose channel has the given average gate fidelity.
double depolarizing_for_average_fidelity(double average_fidelity);

/// Ideal CZ followed by two-qubit depolarizing noise whose average gate
/// fidelity equals `gate_fidelity`.
void apply_cz(DensityMatrix& rho, int q1, int q2, double gate_fidelity = 1.0);

/// Projects qubit `q` onto |outcome> without renormalizing (trace becomes
/// the outcome probability).
DensityMatrix project(const DensityMatrix& rho, int q, int outcome);

/// Traces out the listed qubits; remaining qubits keep their relative order.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> traced);

/// Werner state w |B><B| + (1 - w) I/4 with Bell fidelity `fidelity`.
DensityMatrix werner_pair(double fidelity, Bell target = Bell::kPsiPlus);

double bell_fidelity(const DensityMatrix& rho, Bell target);

}  // namespace qdrep::qsim
