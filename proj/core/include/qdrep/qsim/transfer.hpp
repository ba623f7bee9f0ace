#pragma once

#include "qdrep/qsim/linalg.hpp"

namespace qdrep::qsim {

/// Electron-to-nuclear-ensemble state transfer under the flip-flop
/// Hamiltonian H = A' sum_i (sigma_+^i S_- + sigma_-^i S_+).
///
/// In the symmetric (Dicke) sector the ensemble is described by its
/// excitation number k = 0..N and the collective mode Phi+ = N^{-1/2} sum
/// sigma_+ couples |up,0> to |down,1> at g = sqrt(N) A'.
struct TransferParams {
  int nuclei = 1;
  double hyperfine = 1.0;  ///< per-nucleus coupling A', rad/s
  int delta_m = 1;

  double collective_coupling() const;
};

enum class Spin { kDown = 0, kUp = 1 };

/// Pure state of one electron plus its nuclear ensemble. In the collective
/// basis amplitudes are indexed by collective_index(); in the full product
/// basis bit 0 is the electron (1 = up) and bit i is nucleus i (1 = flipped).
struct PureState {
  Vector amplitudes;

  double norm() const { return amplitudes.norm(); }
};

inline constexpr int kMaxFullSpaceNuclei = 10;

int collective_dimension(int nuclei);
int collective_index(Spin electron, int excitations, int nuclei);

/// (alpha |up> + beta |down>) (x) |0>, collective basis.
PureState collective_product_state(Complex alpha, Complex beta, int nuclei);

Matrix build_flipflop_hamiltonian(const TransferParams& p);

Matrix transfer_propagator(const TransferParams& p, double t);

PureState evolve_transfer(const PureState& state, const TransferParams& p, double t);

/// Maps a collective-basis state into the full 2^(N+1) product space
/// (|e, k> -> |e> (x) Dicke state with k excitations).
PureState embed_collective(const PureState& collective, int nuclei);

/// Dense full-space Hamiltonian (spin-1/2 nuclei, delta_m = 1).
Matrix build_full_space_hamiltonian(const TransferParams& p);

/// Exact evolution in the full product space, block-diagonalized by the
/// conserved excitation number. Throws std::length_error for N > 10 and
/// std::invalid_argument for delta_m != 1.
PureState full_space_oracle(const PureState& state, const TransferParams& p, double t);

Matrix full_space_propagator(const TransferParams& p, double t);

}  // namespace qdrep::qsim
