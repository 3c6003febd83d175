#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "varprop/operator_core.hpp"

namespace varprop {

/// One Pauli string with a real coefficient: coeff * prod_j sigma^{axis_j}_{site_j}.
/// Sites are 1-based and pairwise distinct within a term.
struct PauliTerm {
  double coeff = 0.0;
  std::vector<std::pair<int, PauliAxis>> ops;
};

Matrix term_matrix(const PauliTerm& term, int n_qubits);

/// Pauli strings commute iff they collide on an even number of sites
/// (a collision = same site, different axes).
bool terms_commute(const PauliTerm& a, const PauliTerm& b);

/// Named Hermitian summand of a Hamiltonian whose Pauli terms mutually commute.
struct Block {
  std::string name;
  std::vector<PauliTerm> terms;
  GeneratorPtr op;
};

/// A Hamiltonian together with an ordered internally-commuting block split.
/// Construction verifies that the blocks sum to H and that each block's term
/// list is pairwise commuting.
struct HamiltonianSplit {
  int n_qubits = 0;
  GeneratorPtr hamiltonian;
  std::vector<Block> blocks;
  std::map<std::string, double> couplings;

  const Block& block(std::string_view name) const;
  bool has_block(std::string_view name) const;
  Eigen::Index dim() const { return hamiltonian->dim(); }

  /// Same Hamiltonian with blocks listed in the requested order.
  HamiltonianSplit reordered(const std::vector<std::string>& names) const;
};

/// Assembles a split from term lists, checking the block-sum and
/// within-block commutation invariants.
HamiltonianSplit make_split(int n_qubits,
                            std::vector<std::pair<std::string, std::vector<PauliTerm>>> blocks,
                            std::map<std::string, double> couplings);

/// H = h_x sigma_x + h_z sigma_z on one qubit; blocks A = h_x X, B = h_z Z.
HamiltonianSplit build_two_level(double h_x, double h_z);

/// Closed-form propagator cos(Omega t) I - i sin(Omega t) H / Omega,
/// Omega = sqrt(h_x^2 + h_z^2).
Matrix exact_two_level_propagator(double h_x, double h_z, double t);

/// Continuous-branch parameters {c0 (= c2), c1} for which the three-factor
/// ansatz e^{i c0 A} e^{i c1 B} e^{i c0 A} reproduces the two-level propagator
/// exactly. The arctan branch is unwrapped so both functions are smooth in t.
std::array<double, 2> two_level_analytic_params(double h_x, double h_z, double t);

/// Ising chain (open boundary, S = sigma/2):
///   H = J sum_{j<N} S^z_j S^z_{j+1} + h_x sum_j S^x_j + h_z sum_j S^z_j
/// Blocks: A = transverse field, B = ZZ couplings + longitudinal field.
HamiltonianSplit build_qim(double J, double h_x, double h_z, int n_qubits);

/// XXZ chain, nearest neighbours only, even/odd bond split (bond j starts at
/// site j, 1-based; A = even-start bonds, B = odd-start bonds).
HamiltonianSplit build_xxz_nn(double J1, double delta1, int n_qubits);

/// XXZ chain with next-nearest-neighbour couplings, axis split:
/// A = all XX terms, B = all YY terms, C = all ZZ terms.
HamiltonianSplit build_xxz_nnn(double J1, double J2, double delta1,
                               double delta2, int n_qubits);

/// Basis state with every spin up (unit amplitude on index 0).
Vector all_up_state(int n_qubits);

/// (1/N) sum_j <psi| S^z_j |psi>
double magnetization(const Vector& psi, int n_qubits);

}  // namespace varprop
