#include "varprop/circuit.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace varprop {

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Matrix gate_matrix(const Gate& gate, int n_qubits) {
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  const Complex i(0.0, 1.0);
  switch (gate.kind) {
    case GateKind::RX: {
      Matrix u = std::cos(gate.angle / 2.0) * Matrix::Identity(dim, dim) -
                 i * std::sin(gate.angle / 2.0) *
                     pauli_site_operator(PauliAxis::X, gate.q0 + 1, n_qubits);
      return u;
    }
    case GateKind::RZ: {
      Matrix u = std::cos(gate.angle / 2.0) * Matrix::Identity(dim, dim) -
                 i * std::sin(gate.angle / 2.0) *
                     pauli_site_operator(PauliAxis::Z, gate.q0 + 1, n_qubits);
      return u;
    }
    case GateKind::CNOT: {
      if (gate.q0 == gate.q1)
        throw std::invalid_argument("CNOT control equals target");
      Matrix u = Matrix::Zero(dim, dim);
      // site k+1 <-> bit (n-1-k) counting from the least significant end
      const int cbit = n_qubits - 1 - gate.q0;
      const int tbit = n_qubits - 1 - gate.q1;
      for (Eigen::Index idx = 0; idx < dim; ++idx) {
        Eigen::Index out = idx;
        if ((idx >> cbit) & 1) out = idx ^ (Eigen::Index(1) << tbit);
        u(out, idx) = 1.0;
      }
      return u;
    }
  }
  throw std::logic_error("unknown gate kind");
}

void check_qubit(int q, int n) {
  if (q < 0 || q >= n)
    throw std::invalid_argument("gate qubit " + std::to_string(q) + " out of range");
}

}  // namespace

GateProgram emit_qim_ansatz(const ProductAnsatz& ansatz, const RealVector& c) {
  const auto& split = ansatz.split();
  const bool is_qim = split.couplings.count("J") && split.couplings.count("h_x") &&
                      split.couplings.count("h_z") && split.blocks.size() == 2;
  if (!is_qim)
    throw std::invalid_argument("emit_qim_ansatz: split is not an Ising split");
  const int n = split.n_qubits;
  const double J = split.couplings.at("J");
  const double hx = split.couplings.at("h_x");
  const double hz = split.couplings.at("h_z");
  const auto values = ansatz.slot_values(c);

  GateProgram program;
  program.n_qubits = n;
  program.frozen_params = values;

  for (int f = 0; f < ansatz.factor_count(); ++f) {
    program.layer_offsets.push_back(program.gates.size());
    const double cf = values[std::size_t(ansatz.factors()[std::size_t(f)].slot)];
    const std::string& block = ansatz.factor_block(f).name;
    if (block == "A") {
      // exp(i c hx sum_j X_j / 2) = prod_j RX(-c hx)
      for (int q = 0; q < n; ++q)
        program.gates.push_back({GateKind::RX, q, -1, -cf * hx});
    } else if (block == "B") {
      for (int q = 0; q < n; ++q)
        program.gates.push_back({GateKind::RZ, q, -1, -cf * hz});
      // exp(i c J Z_j Z_{j+1} / 4) = CNOT . RZ(-c J / 2) . CNOT per bond,
      // even-start bonds first so each half-layer runs depth-parallel
      for (int parity = 0; parity < 2; ++parity)
        for (int q = parity; q + 1 < n; q += 2) {
          program.gates.push_back({GateKind::CNOT, q, q + 1, 0.0});
          program.gates.push_back({GateKind::RZ, q + 1, -1, -cf * J / 2.0});
          program.gates.push_back({GateKind::CNOT, q, q + 1, 0.0});
        }
    } else {
      throw std::invalid_argument("emit_qim_ansatz: unexpected block '" + block + "'");
    }
  }
  return program;
}

Matrix program_to_unitary(const GateProgram& program) {
  const Eigen::Index dim = Eigen::Index(1) << program.n_qubits;
  Matrix u = Matrix::Identity(dim, dim);
  for (const auto& gate : program.gates) {
    check_qubit(gate.q0, program.n_qubits);
    if (gate.kind == GateKind::CNOT) check_qubit(gate.q1, program.n_qubits);
    u = u * gate_matrix(gate, program.n_qubits);
  }
  return u;
}

double phase_invariant_fidelity(const Matrix& u, const Matrix& v) {
  if (u.rows() != v.rows())
    throw std::invalid_argument("fidelity: dimension mismatch");
  return std::abs((u.adjoint() * v).trace()) / double(u.rows());
}

GateCounts layer_gate_counts(std::string_view pattern, int n_qubits) {
  GateCounts counts;
  for (char ch : pattern) {
    if (ch == 'A') {
      counts.rx += n_qubits;
    } else if (ch == 'B') {
      counts.rz += 2 * n_qubits - 1;
      counts.cnot += 2 * n_qubits - 2;
    } else {
      throw std::invalid_argument(std::string("gate_counts: unknown factor '") + ch + "'");
    }
  }
  return counts;
}

GateCounts gate_counts(std::string_view pattern, int n_qubits, long layers) {
  GateCounts per = layer_gate_counts(pattern, n_qubits);
  return {per.rx * layers, per.rz * layers, per.cnot * layers};
}

std::string export_text(const GateProgram& program) {
  std::ostringstream out;
  out << "# qubits " << program.n_qubits << "\n";
  out << "# params";
  for (double p : program.frozen_params) out << ' ' << fmt17(p);
  out << "\n";
  for (const auto& gate : program.gates) {
    switch (gate.kind) {
      case GateKind::RX:
        out << "rx(" << fmt17(gate.angle) << ") q[" << gate.q0 << "];\n";
        break;
      case GateKind::RZ:
        out << "rz(" << fmt17(gate.angle) << ") q[" << gate.q0 << "];\n";
        break;
      case GateKind::CNOT:
        out << "cx q[" << gate.q0 << "],q[" << gate.q1 << "];\n";
        break;
    }
  }
  return out.str();
}

GateProgram parse_program_text(const std::string& text) {
  GateProgram program;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      int n = 0;
      if (std::sscanf(line.c_str(), "# qubits %d", &n) == 1) program.n_qubits = n;
      if (line.rfind("# params", 0) == 0) {
        std::istringstream ps(line.substr(8));
        double v;
        while (ps >> v) program.frozen_params.push_back(v);
      }
      continue;
    }
    double angle = 0.0;
    int q0 = 0, q1 = 0;
    if (std::sscanf(line.c_str(), "rx(%lf) q[%d];", &angle, &q0) == 2) {
      program.gates.push_back({GateKind::RX, q0, -1, angle});
    } else if (std::sscanf(line.c_str(), "rz(%lf) q[%d];", &angle, &q0) == 2) {
      program.gates.push_back({GateKind::RZ, q0, -1, angle});
    } else if (std::sscanf(line.c_str(), "cx q[%d],q[%d];", &q0, &q1) == 2) {
      program.gates.push_back({GateKind::CNOT, q0, q1, 0.0});
    } else {
      throw std::invalid_argument("unparseable gate line: " + line);
    }
  }
  return program;
}

}  // namespace varprop
