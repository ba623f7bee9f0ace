#include "qdrep/qsim/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qdrep::qsim {
namespace {

void check_qubit(const DensityMatrix& rho, int q) {
  if (q < 0 || q >= rho.qubits()) {
    throw std::out_of_range("qubit index " + std::to_string(q) + " outside register of " +
                            std::to_string(rho.qubits()));
  }
}

int qubits_for_dimension(Eigen::Index dim) {
  int q = 0;
  while ((Eigen::Index{1} << q) < dim) ++q;
  if ((Eigen::Index{1} << q) != dim) throw std::invalid_argument("dimension is not a power of two");
  if (q > kMaxQubits) throw std::length_error("register exceeds eight qubits");
  return q;
}

}  // namespace

DensityMatrix::DensityMatrix(int qubits) : qubits_(qubits) {
  if (qubits < 1 || qubits > kMaxQubits) throw std::length_error("DensityMatrix: 1..8 qubits supported");
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  rho_ = Matrix::Zero(dim, dim);
  rho_(0, 0) = 1.0;
}

DensityMatrix DensityMatrix::from_pure(const Vector& psi) {
  const int q = qubits_for_dimension(psi.size());
  return DensityMatrix(q, psi * psi.adjoint());
}

DensityMatrix DensityMatrix::from_matrix(Matrix rho) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("DensityMatrix: matrix must be square");
  const int q = qubits_for_dimension(rho.rows());
  return DensityMatrix(q, std::move(rho));
}

double DensityMatrix::trace() const { return rho_.trace().real(); }

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool DensityMatrix::is_physical(double tol) const {
  return is_hermitian(rho_, tol) && std::abs(trace() - 1.0) <= tol && min_eigenvalue() >= -tol;
}

DensityMatrix DensityMatrix::tensor(const DensityMatrix& other) const {
  if (qubits_ + other.qubits_ > kMaxQubits) throw std::length_error("tensor: register exceeds eight qubits");
  // Basis index = low (this) + high (other) << qubits_, so other occupies the high bits.
  const Eigen::Index da = dimension();
  const Eigen::Index db = other.dimension();
  Matrix out(da * db, da * db);
  for (Eigen::Index bi = 0; bi < db; ++bi) {
    for (Eigen::Index bj = 0; bj < db; ++bj) {
      out.block(bi * da, bj * da, da, da) = other.rho_(bi, bj) * rho_;
    }
  }
  return DensityMatrix(qubits_ + other.qubits_, std::move(out));
}

Vector bell_state(Bell which) {
  const double s = 1.0 / std::sqrt(2.0);
  Vector v = Vector::Zero(4);
  switch (which) {
    case Bell::kPhiPlus: v[0] = s; v[3] = s; break;
    case Bell::kPhiMinus: v[0] = s; v[3] = -s; break;
    case Bell::kPsiPlus: v[1] = s; v[2] = s; break;
    case Bell::kPsiMinus: v[1] = s; v[2] = -s; break;
  }
  return v;
}

Matrix hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix h(2, 2);
  h << s, s, s, -s;
  return h;
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix cz_matrix() {
  Matrix m = Matrix::Identity(4, 4);
  m(3, 3) = -1.0;
  return m;
}

Matrix apply_left(const Matrix& m, const Matrix& u, std::span<const int> targets) {
  const int k = static_cast<int>(targets.size());
  const Eigen::Index sub = Eigen::Index{1} << k;
  if (u.rows() != sub || u.cols() != sub) throw std::invalid_argument("apply_left: operator size mismatch");
  const Eigen::Index dim = m.rows();

  Eigen::Index mask = 0;
  for (int t : targets) mask |= Eigen::Index{1} << t;
  std::vector<Eigen::Index> offsets(sub);
  for (Eigen::Index a = 0; a < sub; ++a) {
    Eigen::Index off = 0;
    for (int j = 0; j < k; ++j) {
      if (a & (Eigen::Index{1} << j)) off |= Eigen::Index{1} << targets[j];
    }
    offsets[a] = off;
  }

  Matrix out(dim, m.cols());
  Vector gathered(sub);
  for (Eigen::Index base = 0; base < dim; ++base) {
    if (base & mask) continue;
    for (Eigen::Index col = 0; col < m.cols(); ++col) {
      for (Eigen::Index a = 0; a < sub; ++a) gathered[a] = m(base | offsets[a], col);
      const Vector mixed = u * gathered;
      for (Eigen::Index a = 0; a < sub; ++a) out(base | offsets[a], col) = mixed[a];
    }
  }
  return out;
}

void apply_unitary(DensityMatrix& rho, const Matrix& u, std::span<const int> targets) {
  for (int t : targets) check_qubit(rho, t);
  const Matrix left = apply_left(rho.matrix(), u, targets);
  rho.matrix() = apply_left(left.adjoint(), u, targets).adjoint();
}

void apply_unitary(DensityMatrix& rho, const Matrix& u, std::initializer_list<int> targets) {
  apply_unitary(rho, u, std::span<const int>(targets.begin(), targets.size()));
}

void apply_kraus(DensityMatrix& rho, std::span<const Matrix> kraus, std::span<const int> targets) {
  for (int t : targets) check_qubit(rho, t);
  Matrix acc = Matrix::Zero(rho.dimension(), rho.dimension());
  for (const Matrix& k : kraus) {
    const Matrix left = apply_left(rho.matrix(), k, targets);
    acc += apply_left(left.adjoint(), k, targets).adjoint();
  }
  rho.matrix() = std::move(acc);
}

std::vector<Matrix> depolarizing_kraus_2q(double p) {
  if (p < 0.0 || p > 16.0 / 15.0) throw std::invalid_argument("depolarizing_kraus_2q: p outside [0, 16/15]");
  const Matrix paulis[4] = {Matrix::Identity(2, 2), pauli_x(), pauli_y(), pauli_z()};
  std::vector<Matrix> out;
  out.reserve(16);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const double weight = (a == 0 && b == 0) ? 1.0 - 15.0 * p / 16.0 : p / 16.0;
      // Index bit 0 belongs to the first target, so the first factor is the high one.
      Matrix k(4, 4);
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) k(r, c) = paulis[b](r >> 1, c >> 1) * paulis[a](r & 1, c & 1);
      }
      out.push_back(std::sqrt(weight) * k);
    }
  }
  return out;
}

double depolarizing_for_average_fidelity(double average_fidelity) {
  constexpr double d = 4.0;
  const double process = ((d + 1.0) * average_fidelity - 1.0) / d;
  return (1.0 - process) * 16.0 / 15.0;
}

void apply_cz(DensityMatrix& rho, int q1, int q2, double gate_fidelity) {
  if (q1 == q2) throw std::invalid_argument("apply_cz: control and target must differ");
  check_qubit(rho, q1);
  check_qubit(rho, q2);
  const int targets[2] = {q1, q2};
  apply_unitary(rho, cz_matrix(), targets);
  if (gate_fidelity < 1.0) {
    const auto kraus = depolarizing_kraus_2q(depolarizing_for_average_fidelity(gate_fidelity));
    apply_kraus(rho, kraus, targets);
  }
}

DensityMatrix project(const DensityMatrix& rho, int q, int outcome) {
  check_qubit(rho, q);
  Matrix m = rho.matrix();
  const Eigen::Index bit = Eigen::Index{1} << q;
  const Eigen::Index want = outcome ? bit : 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if ((i & bit) != want || (j & bit) != want) m(i, j) = 0.0;
    }
  }
  return DensityMatrix::from_matrix(std::move(m));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> traced) {
  for (int t : traced) check_qubit(rho, t);
  std::vector<int> kept;
  for (int q = 0; q < rho.qubits(); ++q) {
    if (std::find(traced.begin(), traced.end(), q) == traced.end()) kept.push_back(q);
  }
  if (kept.empty()) throw std::invalid_argument("partial_trace: cannot trace out every qubit");

  const Eigen::Index dk = Eigen::Index{1} << kept.size();
  const Eigen::Index dt = Eigen::Index{1} << (rho.qubits() - static_cast<int>(kept.size()));
  std::vector<int> gone(traced.begin(), traced.end());
  auto compose = [](const std::vector<int>& qs, Eigen::Index bits) {
    Eigen::Index idx = 0;
    for (std::size_t j = 0; j < qs.size(); ++j) {
      if (bits & (Eigen::Index{1} << j)) idx |= Eigen::Index{1} << qs[j];
    }
    return idx;
  };

  Matrix out = Matrix::Zero(dk, dk);
  for (Eigen::Index i = 0; i < dk; ++i) {
    const Eigen::Index ri = compose(kept, i);
    for (Eigen::Index j = 0; j < dk; ++j) {
      const Eigen::Index rj = compose(kept, j);
      Complex acc = 0.0;
      for (Eigen::Index e = 0; e < dt; ++e) {
        const Eigen::Index off = compose(gone, e);
        acc += rho.matrix()(ri | off, rj | off);
      }
      out(i, j) = acc;
    }
  }
  return DensityMatrix::from_matrix(std::move(out));
}

DensityMatrix werner_pair(double fidelity, Bell target) {
  const double w = (4.0 * fidelity - 1.0) / 3.0;
  const Vector b = bell_state(target);
  Matrix m = w * (b * b.adjoint()) + (1.0 - w) / 4.0 * Matrix::Identity(4, 4);
  return DensityMatrix::from_matrix(std::move(m));
}

double bell_fidelity(const DensityMatrix& rho, Bell target) {
  if (rho.qubits() != 2) throw std::invalid_argument("bell_fidelity: two-qubit state required");
  const Vector b = bell_state(target);
  return (b.adjoint() * rho.matrix() * b)(0, 0).real();
}

}  // namespace qdrep::qsim
