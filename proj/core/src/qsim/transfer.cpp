#include "qdrep/qsim/transfer.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qdrep::qsim {
namespace {

void check_nuclei(int nuclei) {
  if (nuclei < 1) throw std::invalid_argument("transfer: need at least one nucleus");
}

void check_full_space(const TransferParams& p) {
  check_nuclei(p.nuclei);
  if (p.nuclei > kMaxFullSpaceNuclei) {
    throw std::length_error("full_space_oracle: N = " + std::to_string(p.nuclei) +
                            " exceeds the 10-nucleus limit");
  }
  if (p.delta_m != 1) {
    throw std::invalid_argument("full_space_oracle: only the delta_m = 1 mode has a product-space form");
  }
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Full-space basis grouped by excitation number (electron up + flipped nuclei).
struct Blocks {
  std::vector<std::vector<int>> states;
  std::vector<int> block_of;
  std::vector<int> position;
};

Blocks group_by_excitation(int nuclei) {
  const int dim = 1 << (nuclei + 1);
  Blocks b;
  b.states.resize(nuclei + 2);
  b.block_of.resize(dim);
  b.position.resize(dim);
  for (int s = 0; s < dim; ++s) {
    const int q = std::popcount(static_cast<unsigned>(s));
    b.block_of[s] = q;
    b.position[s] = static_cast<int>(b.states[q].size());
    b.states[q].push_back(s);
  }
  return b;
}

Matrix block_hamiltonian(const std::vector<int>& states, const Blocks& b, const TransferParams& p) {
  const auto n = static_cast<Eigen::Index>(states.size());
  Matrix h = Matrix::Zero(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    const int s = states[col];
    if ((s & 1) == 0) continue;  // electron must be up to flip down
    for (int i = 1; i <= p.nuclei; ++i) {
      if (s & (1 << i)) continue;
      const int t = (s & ~1) | (1 << i);
      const Eigen::Index row = b.position[t];
      h(row, col) += p.hyperfine;
      h(col, row) += p.hyperfine;
    }
  }
  return h;
}

}  // namespace

double TransferParams::collective_coupling() const {
  return std::sqrt(static_cast<double>(nuclei)) * hyperfine;
}

int collective_dimension(int nuclei) { return 2 * (nuclei + 1); }

int collective_index(Spin electron, int excitations, int nuclei) {
  return static_cast<int>(electron) * (nuclei + 1) + excitations;
}

PureState collective_product_state(Complex alpha, Complex beta, int nuclei) {
  check_nuclei(nuclei);
  PureState s{Vector::Zero(collective_dimension(nuclei))};
  s.amplitudes[collective_index(Spin::kUp, 0, nuclei)] = alpha;
  s.amplitudes[collective_index(Spin::kDown, 0, nuclei)] = beta;
  return s;
}

Matrix build_flipflop_hamiltonian(const TransferParams& p) {
  check_nuclei(p.nuclei);
  if (p.nuclei > 1000) throw std::length_error("build_flipflop_hamiltonian: too many nuclei");
  if (p.delta_m != 1 && p.delta_m != 2) {
    throw std::invalid_argument("build_flipflop_hamiltonian: delta_m must be 1 or 2");
  }
  const int n = p.nuclei;
  Matrix h = Matrix::Zero(collective_dimension(n), collective_dimension(n));
  // <down, k+1| A' J+ S- |up, k> with the Dicke ladder element sqrt((k+1)(N-k)).
  for (int k = 0; k < n; ++k) {
    const double amp = p.hyperfine * std::sqrt(static_cast<double>((k + 1) * (n - k)));
    const int up = collective_index(Spin::kUp, k, n);
    const int down = collective_index(Spin::kDown, k + 1, n);
    h(down, up) = amp;
    h(up, down) = amp;
  }
  return h;
}

Matrix transfer_propagator(const TransferParams& p, double t) {
  return Propagator(build_flipflop_hamiltonian(p)).at(t);
}

PureState evolve_transfer(const PureState& state, const TransferParams& p, double t) {
  if (state.amplitudes.size() != collective_dimension(p.nuclei)) {
    throw std::invalid_argument("evolve_transfer: state dimension does not match N");
  }
  return {Propagator(build_flipflop_hamiltonian(p)).apply(state.amplitudes, t)};
}

PureState embed_collective(const PureState& collective, int nuclei) {
  check_nuclei(nuclei);
  if (nuclei > kMaxFullSpaceNuclei) throw std::length_error("embed_collective: N too large");
  if (collective.amplitudes.size() != collective_dimension(nuclei)) {
    throw std::invalid_argument("embed_collective: state dimension does not match N");
  }
  const int dim = 1 << (nuclei + 1);
  PureState full{Vector::Zero(dim)};
  for (int s = 0; s < dim; ++s) {
    const auto e = static_cast<Spin>(s & 1);
    const int k = std::popcount(static_cast<unsigned>(s >> 1));
    full.amplitudes[s] =
        collective.amplitudes[collective_index(e, k, nuclei)] / std::sqrt(binomial(nuclei, k));
  }
  return full;
}

Matrix build_full_space_hamiltonian(const TransferParams& p) {
  check_full_space(p);
  const Blocks b = group_by_excitation(p.nuclei);
  const int dim = 1 << (p.nuclei + 1);
  Matrix h = Matrix::Zero(dim, dim);
  for (const auto& states : b.states) {
    const Matrix block = block_hamiltonian(states, b, p);
    for (std::size_t i = 0; i < states.size(); ++i) {
      for (std::size_t j = 0; j < states.size(); ++j) {
        h(states[i], states[j]) = block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  }
  return h;
}

PureState full_space_oracle(const PureState& state, const TransferParams& p, double t) {
  check_full_space(p);
  const int dim = 1 << (p.nuclei + 1);
  if (state.amplitudes.size() != dim) {
    throw std::invalid_argument("full_space_oracle: state dimension does not match 2^(N+1)");
  }
  const Blocks b = group_by_excitation(p.nuclei);
  PureState out{Vector::Zero(dim)};
  for (const auto& states : b.states) {
    const auto n = static_cast<Eigen::Index>(states.size());
    Vector local(n);
    for (Eigen::Index i = 0; i < n; ++i) local[i] = state.amplitudes[states[i]];
    if (local.squaredNorm() == 0.0) continue;
    const Vector evolved = Propagator(block_hamiltonian(states, b, p)).apply(local, t);
    for (Eigen::Index i = 0; i < n; ++i) out.amplitudes[states[i]] = evolved[i];
  }
  return out;
}

Matrix full_space_propagator(const TransferParams& p, double t) {
  return Propagator(build_full_space_hamiltonian(p)).at(t);
}

}  // namespace qdrep::qsim
