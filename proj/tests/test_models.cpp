#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "varprop/models.hpp"

using namespace varprop;

namespace {

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

double spin_z_expectation(const Vector& psi, int n) {
  // oracle: explicit (1/N) sum_j <psi| sigma_z_j / 2 |psi>
  Complex acc = 0.0;
  for (int j = 1; j <= n; ++j)
    acc += (psi.adjoint() * (0.5 * pauli_site_operator(PauliAxis::Z, j, n)) * psi)(0);
  return acc.real() / double(n);
}

}  // namespace

TEST_CASE("two-level split") {
  const auto split = build_two_level(5.0, 2.0);
  CHECK(split.n_qubits == 1);
  const auto& evals = split.hamiltonian->eigenvalues();
  const double omega = std::sqrt(29.0);
  CHECK(evals(0) == doctest::Approx(-omega).epsilon(1e-12));
  CHECK(evals(1) == doctest::Approx(omega).epsilon(1e-12));

  const auto degenerate = build_two_level(1.0, 0.0);
  CHECK(degenerate.block("B").op->matrix().cwiseAbs().maxCoeff() == 0.0);

  const auto pythagorean = build_two_level(3.0, 4.0);
  CHECK(pythagorean.hamiltonian->eigenvalues()(1) == doctest::Approx(5.0).epsilon(1e-12));

  CHECK_THROWS_AS(build_two_level(0.0, 0.0), std::invalid_argument);
}

TEST_CASE("two-level closed-form propagator") {
  const double hx = 5.0, hz = 2.0;
  const double omega = std::hypot(hx, hz);
  CHECK((exact_two_level_propagator(hx, hz, 0.0) - Matrix::Identity(2, 2)).norm() < 1e-15);
  CHECK((exact_two_level_propagator(hx, hz, M_PI / omega) + Matrix::Identity(2, 2)).norm() <
        1e-12);

  // eigendecomposition oracle
  const auto split = build_two_level(hx, hz);
  for (double t : {0.1, 0.5, 1.3}) {
    const Matrix viaeig = split.hamiltonian->exp_itheta(-t);
    CHECK((exact_two_level_propagator(hx, hz, t) - viaeig).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("two-level analytic parameters reconstruct the propagator") {
  const double hx = 5.0, hz = 2.0;
  const auto split = build_two_level(hx, hz);
  const auto& a = split.block("A").op;
  const auto& b = split.block("B").op;
  // includes both arctan branch crossings of Omega t on [0, 1]
  for (double t = 0.0; t <= 1.0; t += 0.02) {
    const auto [c0, c1] = two_level_analytic_params(hx, hz, t);
    const Matrix u = a->exp_itheta(c0) * b->exp_itheta(c1) * a->exp_itheta(c0);
    CHECK((u - exact_two_level_propagator(hx, hz, t)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("two-level analytic parameters are continuous") {
  const double hx = 5.0, hz = 2.0;
  double prev0 = 0.0, prev1 = 0.0;
  bool first = true;
  for (double t = 0.0; t <= 1.0; t += 1e-3) {
    const auto [c0, c1] = two_level_analytic_params(hx, hz, t);
    if (!first) {
      CHECK(std::abs(c0 - prev0) < 2e-3);
      CHECK(std::abs(c1 - prev1) < 5e-3);
    }
    prev0 = c0;
    prev1 = c1;
    first = false;
  }
}

TEST_CASE("qim split") {
  const auto split = build_qim(1.0, 1.0, 1.0, 5);
  CHECK(split.dim() == 32);
  CHECK(std::abs(split.hamiltonian->matrix().trace()) < 1e-12);

  // transverse-field-only coupling block
  const auto tiny = build_qim(1.0, 1.0, 0.0, 2);
  const Matrix zz = 0.25 * pauli_site_operator(PauliAxis::Z, 1, 2) *
                    pauli_site_operator(PauliAxis::Z, 2, 2);
  CHECK((tiny.block("B").op->matrix() - zz).cwiseAbs().maxCoeff() < 1e-15);

  // dense-trace oracle for Tr[B^2] (the coupling block) at N = 3
  const auto n3 = build_qim(1.0, 1.0, 1.0, 3);
  const Matrix& bm = n3.block("B").op->matrix();
  CHECK((bm * bm).trace().real() == doctest::Approx(7.0).epsilon(1e-12));

  CHECK_THROWS_AS(build_qim(1.0, 1.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("qim block sum and x-block structure") {
  const auto split = build_qim(0.7, 1.3, 0.4, 4);
  const Matrix sum = split.block("A").op->matrix() + split.block("B").op->matrix();
  CHECK((sum - split.hamiltonian->matrix()).cwiseAbs().maxCoeff() < 1e-13);

  Matrix xfield = Matrix::Zero(16, 16);
  for (int j = 1; j <= 4; ++j)
    xfield += 0.5 * 1.3 * pauli_site_operator(PauliAxis::X, j, 4);
  CHECK((split.block("A").op->matrix() - xfield).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("tfim commutes with the global spin flip") {
  const auto split = build_qim(1.0, 0.8, 0.0, 4);
  Matrix flip = Matrix::Identity(16, 16);
  for (int j = 1; j <= 4; ++j) flip = flip * pauli_site_operator(PauliAxis::X, j, 4);
  CHECK(commutator(split.hamiltonian->matrix(), flip).cwiseAbs().maxCoeff() < 1e-12);

  const auto broken = build_qim(1.0, 0.8, 0.3, 4);
  CHECK(commutator(broken.hamiltonian->matrix(), flip).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("xxz nearest-neighbour split") {
  const auto split = build_xxz_nn(1.0, 0.9, 6);
  // even-start bonds: j = 2, 4 -> 6 terms; odd-start: j = 1, 3, 5 -> 9 terms
  CHECK(split.block("A").terms.size() == 6);
  CHECK(split.block("B").terms.size() == 9);

  const auto small = build_xxz_nn(1.0, 1.0, 4);
  const Matrix c = commutator(small.block("A").op->matrix(), small.block("B").op->matrix());
  CHECK(c.cwiseAbs().maxCoeff() > 1e-6);

  // XX limit: no ZZ terms, so the blocks have no diagonal part
  const auto xx = build_xxz_nn(1.0, 0.0, 4);
  CHECK(xx.block("A").op->matrix().diagonal().cwiseAbs().maxCoeff() < 1e-15);
  CHECK(xx.block("B").op->matrix().diagonal().cwiseAbs().maxCoeff() < 1e-15);

  CHECK_THROWS_AS(build_xxz_nn(1.0, 1.0, 2), std::invalid_argument);
}

TEST_CASE("xxz next-nearest-neighbour split") {
  const auto split = build_xxz_nnn(2.0, 0.5, 0.2, 0.2, 5);
  CHECK(split.blocks.size() == 3);
  const Matrix sum = split.block("A").op->matrix() + split.block("B").op->matrix() +
                     split.block("C").op->matrix();
  CHECK((sum - split.hamiltonian->matrix()).cwiseAbs().maxCoeff() < 1e-13);

  // N = 5: 4 NN + 3 NNN terms per axis block
  CHECK(split.block("A").terms.size() == 7);

  // vanishing NNN couplings reduce to the NN Hamiltonian
  const auto degenerate = build_xxz_nnn(1.0, 0.0, 0.9, 0.9, 5);
  const auto nn = build_xxz_nn(1.0, 0.9, 5);
  CHECK((degenerate.hamiltonian->matrix() - nn.hamiltonian->matrix()).cwiseAbs().maxCoeff() <
        1e-13);

  CHECK_THROWS_AS(build_xxz_nnn(1.0, 1.0, 1.0, 1.0, 2), std::invalid_argument);
}

TEST_CASE("xxz conserves total S^z") {
  Matrix sz_total = Matrix::Zero(32, 32);
  for (int j = 1; j <= 5; ++j)
    sz_total += 0.5 * pauli_site_operator(PauliAxis::Z, j, 5);
  for (const Matrix& h : {build_xxz_nn(1.3, 0.7, 5).hamiltonian->matrix(),
                          build_xxz_nnn(1.3, 0.4, 0.7, 0.3, 5).hamiltonian->matrix()})
    CHECK(commutator(h, sz_total).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("non-commuting terms are rejected at construction") {
  std::vector<PauliTerm> bad = {{1.0, {{1, PauliAxis::X}}}, {1.0, {{1, PauliAxis::Z}}}};
  CHECK_THROWS_AS(make_split(2, {{"A", std::move(bad)}}, {}), std::logic_error);
}

TEST_CASE("pauli term commutation predicate") {
  const PauliTerm xx{1.0, {{1, PauliAxis::X}, {2, PauliAxis::X}}};
  const PauliTerm zz{1.0, {{1, PauliAxis::Z}, {2, PauliAxis::Z}}};
  const PauliTerm z1{1.0, {{1, PauliAxis::Z}}};
  CHECK(terms_commute(xx, zz));       // two collisions
  CHECK_FALSE(terms_commute(xx, z1)); // one collision
  // dense cross-check
  const Matrix mxx = term_matrix(xx, 2), mz1 = term_matrix(z1, 2);
  CHECK(commutator(mxx, mz1).cwiseAbs().maxCoeff() > 1e-12);
}

TEST_CASE("all-up state and magnetization") {
  const Vector one = all_up_state(1);
  CHECK(one(0) == Complex(1, 0));
  CHECK(one(1) == Complex(0, 0));

  const Vector three = all_up_state(3);
  CHECK(three(0) == Complex(1, 0));
  CHECK(three.tail(7).cwiseAbs().maxCoeff() == 0.0);

  for (int n : {1, 3, 5})
    CHECK(magnetization(all_up_state(n), n) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("magnetization matches the dense expectation value") {
  std::mt19937 rng(5);
  std::normal_distribution<double> nd;
  const int n = 4;
  Vector psi(16);
  for (Eigen::Index i = 0; i < 16; ++i) psi(i) = Complex(nd(rng), nd(rng));
  psi.normalize();
  CHECK(magnetization(psi, n) == doctest::Approx(spin_z_expectation(psi, n)).epsilon(1e-12));
}

TEST_CASE("split reordering keeps blocks intact") {
  const auto split = build_qim(1.0, 1.0, 1.0, 3);
  const auto flipped = split.reordered({"B", "A"});
  CHECK(flipped.blocks[0].name == "B");
  CHECK((flipped.blocks[0].op->matrix() - split.block("B").op->matrix()).norm() == 0.0);
  CHECK_THROWS_AS(split.reordered({"A"}), std::invalid_argument);
  CHECK_THROWS_AS(split.block("C"), std::invalid_argument);
}
