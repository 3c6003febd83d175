#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "varprop/ansatz.hpp"

namespace varprop {

enum class GateKind { RX, RZ, CNOT };

/// RX(theta) = exp(-i theta X / 2), RZ(theta) = exp(-i theta Z / 2); CNOT has
/// no angle. Qubits are 0-based in gate programs.
struct Gate {
  GateKind kind = GateKind::RX;
  int q0 = 0;
  int q1 = -1;       // CNOT target
  double angle = 0;  // unused for CNOT
};

struct GateProgram {
  int n_qubits = 0;
  std::vector<Gate> gates;
  std::vector<std::size_t> layer_offsets;  // start index of each factor's gates
  std::vector<double> frozen_params;       // per-slot c values the program encodes
};

struct GateCounts {
  long rx = 0, rz = 0, cnot = 0;
  bool operator==(const GateCounts&) const = default;
};

/// Lowers an Ising-split ansatz at frozen parameters to RX/RZ/CNOT gates.
/// x-field factors become one RX(-c h_x) per qubit; coupling factors become
/// RZ(-c h_z) per qubit plus a CNOT / RZ(-c J / 2) / CNOT gadget per bond,
/// even-start bonds (0-based) first.
GateProgram emit_qim_ansatz(const ProductAnsatz& ansatz, const RealVector& c);

/// Dense unitary of a program (rightmost listed gate applied first, matching
/// the ansatz factor order).
Matrix program_to_unitary(const GateProgram& program);

/// |Tr(U^dag V)| / D; equals 1 iff U = V up to a global phase.
double phase_invariant_fidelity(const Matrix& u, const Matrix& v);

/// Per-layer counts for a factor pattern over the Ising split: each 'A' factor
/// needs N RX; each 'B' factor needs (2N-1) RZ and (2N-2) CNOT.
GateCounts layer_gate_counts(std::string_view pattern, int n_qubits);

/// Totals over `layers` repetitions of the pattern.
GateCounts gate_counts(std::string_view pattern, int n_qubits, long layers);

/// One gate per line (`rx(angle) q[i];` / `rz(angle) q[i];` /
/// `cx q[i],q[j];`), 17-significant-digit angles, preceded by a header naming
/// the qubit count and frozen parameters.
std::string export_text(const GateProgram& program);

/// Parses text produced by export_text back into a program (used to verify the
/// format round-trips).
GateProgram parse_program_text(const std::string& text);

}  // namespace varprop
