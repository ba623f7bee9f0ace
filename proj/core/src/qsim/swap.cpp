#include "qdrep/qsim/swap.hpp"

#include <stdexcept>

namespace qdrep::qsim {
namespace {

void check_roles(const DensityMatrix& rho, const SwapRoles& r) {
  const int qs[4] = {r.outer_a, r.inner_a, r.inner_b, r.outer_b};
  for (int i = 0; i < 4; ++i) {
    if (qs[i] < 0 || qs[i] >= rho.qubits()) throw std::out_of_range("swap: qubit index out of range");
    for (int j = 0; j < i; ++j) {
      if (qs[i] == qs[j]) throw std::invalid_argument("swap: qubit roles must be distinct");
    }
  }
}

DensityMatrix entangling_stage(const DensityMatrix& rho, const SwapRoles& r, double gate_fidelity) {
  DensityMatrix out = rho;
  const Matrix h = hadamard();
  apply_unitary(out, h, {r.inner_a});
  apply_cz(out, r.inner_a, r.inner_b, gate_fidelity);
  apply_unitary(out, h, {r.inner_a});
  apply_unitary(out, h, {r.inner_b});
  return out;
}

/// Unnormalized register for each recorded outcome, indexed bit_a + 2 bit_b.
std::array<Matrix, 4> recorded_outcomes(const DensityMatrix& rho, const SwapRoles& r,
                                        const SwapNoise& noise) {
  check_roles(rho, r);
  const double keep = noise.readout_fidelity;
  if (keep < 0.0 || keep > 1.0) throw std::invalid_argument("swap: readout fidelity outside [0, 1]");
  const DensityMatrix mixed = entangling_stage(rho, r, noise.gate_fidelity);

  std::array<Matrix, 4> out;
  for (auto& m : out) m = Matrix::Zero(rho.dimension(), rho.dimension());
  for (int ta = 0; ta < 2; ++ta) {
    for (int tb = 0; tb < 2; ++tb) {
      const DensityMatrix proj = project(project(mixed, r.inner_a, ta), r.inner_b, tb);
      for (int ra = 0; ra < 2; ++ra) {
        for (int rb = 0; rb < 2; ++rb) {
          const double w = (ra == ta ? keep : 1.0 - keep) * (rb == tb ? keep : 1.0 - keep);
          if (w == 0.0) continue;
          DensityMatrix corrected = proj;
          apply_unitary(corrected, swap_correction(ra, rb), {r.outer_b});
          out[ra + 2 * rb] += w * corrected.matrix();
        }
      }
    }
  }
  return out;
}

}  // namespace

Matrix swap_correction(int bit_a, int bit_b) {
  Matrix c = Matrix::Identity(2, 2);
  if (bit_b) c = pauli_z() * c;
  if (!bit_a) c = pauli_x() * c;
  return c;
}

DensityMatrix swap_channel(const DensityMatrix& rho, const SwapRoles& roles, const SwapNoise& noise) {
  const auto parts = recorded_outcomes(rho, roles, noise);
  Matrix sum = parts[0] + parts[1] + parts[2] + parts[3];
  return DensityMatrix::from_matrix(std::move(sum));
}

std::vector<SwapBranch> swap_branches(const DensityMatrix& rho, const SwapRoles& roles,
                                      const SwapNoise& noise) {
  const auto parts = recorded_outcomes(rho, roles, noise);
  std::vector<int> traced;
  for (int q = 0; q < rho.qubits(); ++q) {
    if (q != roles.outer_a && q != roles.outer_b) traced.push_back(q);
  }
  std::vector<SwapBranch> out;
  for (int idx = 0; idx < 4; ++idx) {
    SwapBranch b;
    b.bits = {idx & 1, idx >> 1};
    b.probability = parts[idx].trace().real();
    DensityMatrix reduced = partial_trace(DensityMatrix::from_matrix(parts[idx]), traced);
    if (roles.outer_a > roles.outer_b) {
      const int swap_targets[2] = {0, 1};
      Matrix s = Matrix::Zero(4, 4);
      s(0, 0) = s(3, 3) = s(1, 2) = s(2, 1) = 1.0;
      apply_unitary(reduced, s, swap_targets);
    }
    if (b.probability > 0.0) reduced.matrix() /= b.probability;
    b.state = std::move(reduced);
    out.push_back(std::move(b));
  }
  return out;
}

SwapSample swap_entanglement(const DensityMatrix& rho, const SwapRoles& roles, const SwapNoise& noise,
                             double u) {
  auto branches = swap_branches(rho, roles, noise);
  double acc = 0.0;
  std::size_t pick = branches.size() - 1;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    acc += branches[i].probability;
    if (u < acc) {
      pick = i;
      break;
    }
  }
  // Skip trailing zero-probability branches reached through rounding.
  while (pick > 0 && branches[pick].probability <= 0.0) --pick;
  return {std::move(branches[pick].state), branches[pick].bits};
}

double ChainComponents::pair_fidelity() const {
  return electron_init * electron_init * entanglement * transfer * transfer;
}

double chain_fidelity_oracle(int links, const ChainComponents& c) {
  if (links != 1 && links != 2 && links != 4) {
    throw std::invalid_argument("chain_fidelity_oracle: links must be 1, 2 or 4");
  }
  const DensityMatrix pair = werner_pair(c.pair_fidelity(), Bell::kPsiPlus);
  if (links == 1) return bell_fidelity(pair, Bell::kPsiPlus);

  DensityMatrix reg = pair;
  for (int i = 1; i < links; ++i) reg = reg.tensor(pair);
  const SwapNoise noise{c.gate, c.readout};

  // Pairs occupy (2k, 2k+1). Each level joins neighbouring segments.
  std::vector<std::array<int, 2>> segments;
  for (int k = 0; k < links; ++k) segments.push_back({2 * k, 2 * k + 1});
  while (segments.size() > 1) {
    std::vector<std::array<int, 2>> next;
    for (std::size_t k = 0; k + 1 < segments.size(); k += 2) {
      const SwapRoles roles{segments[k][0], segments[k][1], segments[k + 1][0], segments[k + 1][1]};
      reg = swap_channel(reg, roles, noise);
      next.push_back({segments[k][0], segments[k + 1][1]});
    }
    segments = std::move(next);
  }

  std::vector<int> traced;
  for (int q = 0; q < reg.qubits(); ++q) {
    if (q != segments[0][0] && q != segments[0][1]) traced.push_back(q);
  }
  return bell_fidelity(partial_trace(reg, traced), Bell::kPsiPlus);
}

}  // namespace qdrep::qsim
