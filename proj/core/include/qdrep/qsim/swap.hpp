#pragma once

#include <array>
#include <span>
#include <vector>

#include "qdrep/qsim/density.hpp"

namespace qdrep::qsim {

/// Scalar imperfections of one swap: gate fidelity of the CZ and the
/// probability that each single-qubit readout record is correct.
struct SwapNoise {
  double gate_fidelity = 1.0;
  double readout_fidelity = 1.0;
};

/// Qubit roles of one swap: pairs (outer_a, inner_a) and (inner_b, outer_b)
/// are joined into (outer_a, outer_b) by measuring the inner qubits.
struct SwapRoles {
  int outer_a = 0;
  int inner_a = 1;
  int inner_b = 2;
  int outer_b = 3;
};

/// One recorded measurement outcome. `bits` are the recorded values for
/// (inner_a, inner_b); `state` is the corrected, normalized two-qubit state
/// on (outer_a, outer_b).
struct SwapBranch {
  std::array<int, 2> bits{};
  double probability = 0.0;
  DensityMatrix state{2};
};

/// Pauli frame X^(1 - b0) Z^(b1) on outer_b that maps the ideal output of
/// |Psi+> (x) |Psi+> back to |Psi+>.
Matrix swap_correction(int bit_a, int bit_b);

/// Bell measurement by H(inner_a) CZ H(inner_a), H(inner_b) and Z readout,
/// followed by the recorded-outcome correction. Returns the full register
/// averaged over all outcomes (measured qubits left dephased).
DensityMatrix swap_channel(const DensityMatrix& rho, const SwapRoles& roles,
                           const SwapNoise& noise);

/// Same circuit, resolved into the four recorded outcomes in fixed order
/// (00, 01, 10, 11). Probabilities sum to one.
std::vector<SwapBranch> swap_branches(const DensityMatrix& rho, const SwapRoles& roles,
                                      const SwapNoise& noise);

struct SwapSample {
  DensityMatrix state{2};
  std::array<int, 2> bits{};
};

/// Picks one recorded outcome using the uniform variate `u` in [0, 1).
SwapSample swap_entanglement(const DensityMatrix& rho, const SwapRoles& roles,
                             const SwapNoise& noise, double u);

struct ChainComponents {
  double entanglement = 1.0;
  double transfer = 1.0;
  double gate = 1.0;
  double readout = 1.0;
  double electron_init = 1.0;

  /// Fidelity of each elementary pair, F_e^2 F_ent F_tr^2.
  double pair_fidelity() const;
};

/// End-to-end Bell fidelity of l in {1, 2, 4} Werner pairs joined by l - 1
/// noisy swaps in a nested order, averaged exactly over every branch.
double chain_fidelity_oracle(int links, const ChainComponents& components);

}  // namespace qdrep::qsim
