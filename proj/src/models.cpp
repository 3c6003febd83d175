#include "varprop/models.hpp"

#include <algorithm>
#include <cmath>

namespace varprop {

Matrix term_matrix(const PauliTerm& term, int n_qubits) {
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  Matrix out = term.coeff * Matrix::Identity(dim, dim);
  for (const auto& [site, axis] : term.ops)
    out = out * pauli_site_operator(axis, site, n_qubits);
  return out;
}

bool terms_commute(const PauliTerm& a, const PauliTerm& b) {
  int collisions = 0;
  for (const auto& [site_a, axis_a] : a.ops)
    for (const auto& [site_b, axis_b] : b.ops)
      if (site_a == site_b && axis_a != axis_b) ++collisions;
  return collisions % 2 == 0;
}

const Block& HamiltonianSplit::block(std::string_view name) const {
  for (const auto& b : blocks)
    if (b.name == name) return b;
  throw std::invalid_argument("split has no block named '" + std::string(name) + "'");
}

bool HamiltonianSplit::has_block(std::string_view name) const {
  return std::any_of(blocks.begin(), blocks.end(),
                     [&](const Block& b) { return b.name == name; });
}

HamiltonianSplit HamiltonianSplit::reordered(const std::vector<std::string>& names) const {
  if (names.size() != blocks.size())
    throw std::invalid_argument("reordered: need exactly one name per block");
  HamiltonianSplit out;
  out.n_qubits = n_qubits;
  out.hamiltonian = hamiltonian;
  out.couplings = couplings;
  for (const auto& name : names) out.blocks.push_back(block(name));
  return out;
}

HamiltonianSplit make_split(
    int n_qubits,
    std::vector<std::pair<std::string, std::vector<PauliTerm>>> blocks,
    std::map<std::string, double> couplings) {
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  HamiltonianSplit split;
  split.n_qubits = n_qubits;
  split.couplings = std::move(couplings);

  Matrix total = Matrix::Zero(dim, dim);
  for (auto& [name, terms] : blocks) {
    for (std::size_t i = 0; i < terms.size(); ++i)
      for (std::size_t j = i + 1; j < terms.size(); ++j)
        if (!terms_commute(terms[i], terms[j]))
          throw std::logic_error("block '" + name + "' contains non-commuting terms");
    Matrix m = Matrix::Zero(dim, dim);
    for (const auto& t : terms) m += term_matrix(t, n_qubits);
    total += m;
    split.blocks.push_back(
        Block{name, std::move(terms), std::make_shared<const Generator>(std::move(m))});
  }
  split.hamiltonian = std::make_shared<const Generator>(total);

  Matrix sum = Matrix::Zero(dim, dim);
  for (const auto& b : split.blocks) sum += b.op->matrix();
  if ((sum - split.hamiltonian->matrix()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::logic_error("blocks do not sum to the Hamiltonian");
  return split;
}

HamiltonianSplit build_two_level(double h_x, double h_z) {
  if (h_x == 0.0 && h_z == 0.0)
    throw std::invalid_argument("build_two_level: h_x and h_z both zero");
  std::vector<PauliTerm> a, b;
  a.push_back({h_x, {{1, PauliAxis::X}}});
  b.push_back({h_z, {{1, PauliAxis::Z}}});
  return make_split(1, {{"A", std::move(a)}, {"B", std::move(b)}},
                    {{"h_x", h_x}, {"h_z", h_z}});
}

Matrix exact_two_level_propagator(double h_x, double h_z, double t) {
  const double omega = std::hypot(h_x, h_z);
  if (omega == 0.0)
    throw std::invalid_argument("exact_two_level_propagator: Omega = 0");
  Matrix h = h_x * pauli_matrix(PauliAxis::X) + h_z * pauli_matrix(PauliAxis::Z);
  return std::cos(omega * t) * Matrix::Identity(2, 2) -
         Complex(0.0, 1.0) * (std::sin(omega * t) / omega) * h;
}

std::array<double, 2> two_level_analytic_params(double h_x, double h_z, double t) {
  const double omega = std::hypot(h_x, h_z);
  if (h_x == 0.0 || h_z == 0.0 || omega == 0.0)
    throw std::invalid_argument("two_level_analytic_params: need h_x, h_z != 0");
  // arctan picks up a -pi jump every time Omega t crosses (k+1/2) pi.
  const double branch = std::round(omega * t / M_PI);
  const double c0 =
      (std::atan(-h_x * std::tan(omega * t) / omega) - M_PI * branch) / (2.0 * h_x);
  const double c1 = std::asin(-h_z * std::sin(omega * t) / omega) / h_z;
  return {c0, c1};
}

HamiltonianSplit build_qim(double J, double h_x, double h_z, int n_qubits) {
  if (n_qubits < 2) throw std::invalid_argument("build_qim: need N >= 2");
  if (n_qubits > kMaxQubits) throw std::invalid_argument("build_qim: N too large");
  std::vector<PauliTerm> a, b;
  for (int j = 1; j <= n_qubits; ++j)
    a.push_back({h_x / 2.0, {{j, PauliAxis::X}}});
  for (int j = 1; j < n_qubits; ++j)
    b.push_back({J / 4.0, {{j, PauliAxis::Z}, {j + 1, PauliAxis::Z}}});
  for (int j = 1; j <= n_qubits; ++j)
    b.push_back({h_z / 2.0, {{j, PauliAxis::Z}}});
  return make_split(n_qubits, {{"A", std::move(a)}, {"B", std::move(b)}},
                    {{"J", J}, {"h_x", h_x}, {"h_z", h_z}});
}

namespace {

void append_bond(std::vector<PauliTerm>& terms, double xy, double zz, int j, int d) {
  terms.push_back({xy, {{j, PauliAxis::X}, {j + d, PauliAxis::X}}});
  terms.push_back({xy, {{j, PauliAxis::Y}, {j + d, PauliAxis::Y}}});
  terms.push_back({zz, {{j, PauliAxis::Z}, {j + d, PauliAxis::Z}}});
}

}  // namespace

HamiltonianSplit build_xxz_nn(double J1, double delta1, int n_qubits) {
  if (n_qubits < 3) throw std::invalid_argument("build_xxz_nn: need N >= 3");
  if (n_qubits > kMaxQubits) throw std::invalid_argument("build_xxz_nn: N too large");
  std::vector<PauliTerm> a, b;
  for (int j = 1; j < n_qubits; ++j)
    append_bond(j % 2 == 0 ? a : b, J1 / 4.0, J1 * delta1 / 4.0, j, 1);
  return make_split(n_qubits, {{"A", std::move(a)}, {"B", std::move(b)}},
                    {{"J1", J1}, {"delta1", delta1}});
}

HamiltonianSplit build_xxz_nnn(double J1, double J2, double delta1,
                               double delta2, int n_qubits) {
  if (n_qubits < 3) throw std::invalid_argument("build_xxz_nnn: need N >= 3");
  if (n_qubits > kMaxQubits) throw std::invalid_argument("build_xxz_nnn: N too large");
  std::vector<PauliTerm> a, b, c;
  auto add_axis = [&](std::vector<PauliTerm>& dst, PauliAxis axis, double j1c, double j2c) {
    for (int j = 1; j < n_qubits; ++j)
      dst.push_back({j1c, {{j, axis}, {j + 1, axis}}});
    for (int j = 1; j + 2 <= n_qubits; ++j)
      dst.push_back({j2c, {{j, axis}, {j + 2, axis}}});
  };
  add_axis(a, PauliAxis::X, J1 / 4.0, J2 / 4.0);
  add_axis(b, PauliAxis::Y, J1 / 4.0, J2 / 4.0);
  add_axis(c, PauliAxis::Z, J1 * delta1 / 4.0, J2 * delta2 / 4.0);
  return make_split(
      n_qubits,
      {{"A", std::move(a)}, {"B", std::move(b)}, {"C", std::move(c)}},
      {{"J1", J1}, {"J2", J2}, {"delta1", delta1}, {"delta2", delta2}});
}

Vector all_up_state(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw std::invalid_argument("all_up_state: qubit count out of range");
  Vector psi = Vector::Zero(Eigen::Index(1) << n_qubits);
  psi(0) = 1.0;
  return psi;
}

double magnetization(const Vector& psi, int n_qubits) {
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  if (psi.size() != dim)
    throw std::invalid_argument("magnetization: dimension mismatch");
  double acc = 0.0;
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    const double p = std::norm(psi(idx));
    if (p == 0.0) continue;
    // bit k (MSB first) up = 0 contributes +1/2, down = 1 contributes -1/2
    int down = 0;
    for (int k = 0; k < n_qubits; ++k)
      if ((idx >> k) & 1) ++down;
    acc += p * 0.5 * double(n_qubits - 2 * down);
  }
  return acc / double(n_qubits);
}

}  // namespace varprop
