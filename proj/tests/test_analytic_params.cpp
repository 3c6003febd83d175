#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "varprop/analytic_params.hpp"
#include "varprop/reference_propagators.hpp"
#include "varprop/variational.hpp"

using namespace varprop;

namespace {

double tr_re(const Matrix& m) { return m.trace().real(); }

// brute-force oracle, independent of the closed forms
TraceRecord dense_record(const Matrix& a, const Matrix& b) {
  TraceRecord r;
  r.a2 = tr_re(a * a);
  r.b2 = tr_re(b * b);
  r.ab = tr_re(a * b);
  r.a2b2 = tr_re(a * a * b * b);
  r.abab = tr_re(a * b * a * b);
  return r;
}

TraceRecord dense_record3(const Matrix& a, const Matrix& b, const Matrix& c) {
  TraceRecord r = dense_record(a, b);
  r.has_three_block = true;
  r.c2 = tr_re(c * c);
  r.ac = tr_re(a * c);
  r.bc = tr_re(b * c);
  r.a2c2 = tr_re(a * a * c * c);
  r.b2c2 = tr_re(b * b * c * c);
  r.a2bc = tr_re(a * a * b * c);
  r.a2cb = tr_re(a * a * c * b);
  r.acac = tr_re(a * c * a * c);
  r.bcbc = tr_re(b * c * b * c);
  r.abac = tr_re(a * b * a * c);
  return r;
}

void check_close(double got, double want, double rel = 1e-9) {
  CHECK(std::abs(got - want) <= rel * std::max(1.0, std::abs(want)));
}

void compare_two_block(const TraceRecord& closed, const TraceRecord& dense) {
  check_close(closed.a2, dense.a2);
  check_close(closed.b2, dense.b2);
  check_close(closed.ab, dense.ab);
  check_close(closed.a2b2, dense.a2b2);
  check_close(closed.abab, dense.abab);
}

}  // namespace

TEST_CASE("chi vanishes exactly when the blocks commute") {
  // commuting blocks on different sites
  std::vector<PauliTerm> ta = {{0.8, {{1, PauliAxis::Z}}}};
  std::vector<PauliTerm> tb = {{1.1, {{2, PauliAxis::X}}}};
  const auto split = make_split(2, {{"A", std::move(ta)}, {"B", std::move(tb)}}, {});
  const auto rec = dense_record(split.block("A").op->matrix(), split.block("B").op->matrix());
  CHECK(chi_factor(rec) == doctest::Approx(0.0).epsilon(1e-14));

  const auto qim = build_qim(1.0, 1.0, 1.0, 3);
  const auto rec_qim =
      dense_record(qim.block("B").op->matrix(), qim.block("A").op->matrix());
  CHECK(chi_factor(rec_qim) > 0.0);
  const double comm_norm = (qim.block("A").op->matrix() * qim.block("B").op->matrix() -
                            qim.block("B").op->matrix() * qim.block("A").op->matrix())
                               .norm();
  CHECK(comm_norm > 1e-6);
}

TEST_CASE("chi is nonnegative on random hermitian pairs") {
  std::mt19937 rng(3);
  std::normal_distribution<double> nd;
  for (int rep = 0; rep < 20; ++rep) {
    Matrix m(4, 4), n(4, 4);
    for (Eigen::Index i = 0; i < 4; ++i)
      for (Eigen::Index j = 0; j < 4; ++j) {
        m(i, j) = Complex(nd(rng), nd(rng));
        n(i, j) = Complex(nd(rng), nd(rng));
      }
    const Matrix a = 0.5 * (m + m.adjoint().eval());
    const Matrix b = 0.5 * (n + n.adjoint().eval());
    CHECK(chi_factor(dense_record(a, b)) >= -1e-12);
  }
}

TEST_CASE("chi rejects proportional blocks") {
  const Matrix a = pauli_matrix(PauliAxis::Z);
  CHECK_THROWS_AS(chi_factor(dense_record(a, Matrix(2.0 * a))), std::invalid_argument);
}

TEST_CASE("two-level chi reduces to the zero-cross-trace form") {
  const auto split = build_two_level(5.0, 2.0);
  const Matrix a = split.block("A").op->matrix();
  const Matrix b = split.block("B").op->matrix();
  const auto rec = dense_record(a, b);
  CHECK(rec.ab == doctest::Approx(0.0).epsilon(1e-14));
  // hand-computed 2x2 oracle: Tr[A^2B^2] = 2 hx^2 hz^2, Tr[(AB)^2] = -2 hx^2 hz^2
  const double hx2 = 25.0, hz2 = 4.0;
  check_close(rec.a2b2, 2.0 * hx2 * hz2, 1e-12);
  check_close(rec.abab, -2.0 * hx2 * hz2, 1e-12);
  check_close(chi_factor(rec), (rec.a2b2 - rec.abab) / (rec.a2 * rec.b2), 1e-12);
}

TEST_CASE("ising closed traces match dense brute force") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> ud(0.3, 2.0);
  for (int n = 3; n <= 5; ++n)
    for (int rep = 0; rep < 2; ++rep) {
      const double J = ud(rng), hx = ud(rng), hz = ud(rng);
      const auto split = build_qim(J, hx, hz, n);
      // trace-table labels: A = coupling block (split "B"), B = x block
      const auto dense =
          dense_record(split.block("B").op->matrix(), split.block("A").op->matrix());
      compare_two_block(ising_closed_traces(J, hx, hz, n), dense);
    }
}

TEST_CASE("ising closed-trace spot values") {
  check_close(ising_closed_traces(1.0, 0.0, 1.0, 3).a2, 7.0, 1e-13);
  check_close(ising_closed_traces(0.0, 1.0, 0.0, 3).b2, 6.0, 1e-13);
  check_close(ising_closed_traces(1.0, 1.0, 1.0, 3).abab, 1.25, 1e-13);
}

TEST_CASE("xxz nearest-neighbour closed traces match dense brute force") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ud(0.3, 2.0);
  for (int n = 3; n <= 6; ++n) {
    const double J1 = ud(rng), d1 = ud(rng);
    const auto split = build_xxz_nn(J1, d1, n);
    const auto dense =
        dense_record(split.block("A").op->matrix(), split.block("B").op->matrix());
    compare_two_block(xxz_nn_closed_traces(J1, d1, n), dense);
  }
  // equal bond counts at N = 3
  const auto r3 = xxz_nn_closed_traces(1.7, 0.4, 3);
  CHECK(r3.a2 == doctest::Approx(r3.b2).epsilon(1e-14));
}

TEST_CASE("xxz next-nearest closed traces match dense brute force") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ud(0.3, 2.0);
  for (int n : {3, 4, 5}) {  // covers both branches of the case split
    const double J1 = ud(rng), J2 = ud(rng), d1 = ud(rng), d2 = ud(rng);
    const auto split = build_xxz_nnn(J1, J2, d1, d2, n);
    const Matrix a = split.block("A").op->matrix();
    const Matrix b = split.block("B").op->matrix();
    const Matrix c = split.block("C").op->matrix();
    const auto dense = dense_record3(a, b, c);
    const auto closed = xxz_nnn_closed_traces(J1, J2, d1, d2, n);
    compare_two_block(closed, dense);
    check_close(closed.c2, dense.c2);
    check_close(closed.ac, dense.ac);
    check_close(closed.bc, dense.bc);
    check_close(closed.a2c2, dense.a2c2);
    check_close(closed.b2c2, dense.b2c2);
    check_close(closed.a2bc, dense.a2bc);
    check_close(closed.a2cb, dense.a2cb);
    check_close(closed.acac, dense.acac);
    check_close(closed.bcbc, dense.bcbc);
    check_close(closed.abac, dense.abac);
    CHECK(closed.ab == 0.0);
    CHECK(closed.ac == 0.0);
    CHECK(closed.bc == 0.0);
  }
}

TEST_CASE("grouped and inner-stage records match dense regrouping") {
  const auto split = build_xxz_nnn(2.0, 0.5, 0.2, 0.2, 5);
  const Matrix a = split.block("A").op->matrix();
  const Matrix b = split.block("B").op->matrix();
  const Matrix c = split.block("C").op->matrix();
  const auto closed = xxz_nnn_closed_traces(2.0, 0.5, 0.2, 0.2, 5);
  compare_two_block(grouped_outer_traces(closed), dense_record(a, Matrix(b + c)));
  compare_two_block(inner_stage_traces(closed), dense_record(b, c));
}

TEST_CASE("two-factor cubic coefficients") {
  // commuting blocks: pure trotter
  std::vector<PauliTerm> ta = {{0.8, {{1, PauliAxis::Z}}}};
  std::vector<PauliTerm> tb = {{1.1, {{2, PauliAxis::X}}}};
  const auto comm = make_split(2, {{"A", std::move(ta)}, {"B", std::move(tb)}}, {});
  const auto rec =
      dense_record(comm.block("A").op->matrix(), comm.block("B").op->matrix());
  for (auto action : {ActionKind::FirstOrder, ActionKind::NormSquared}) {
    const auto params = cubic_2exp(rec, action);
    CHECK(params.slots[0].linear == -1.0);
    CHECK(params.slots[1].linear == -1.0);
    CHECK(std::abs(params.slots[0].cubic) < 1e-12);
    CHECK(std::abs(params.slots[1].cubic) < 1e-12);
  }

  // Ising instance: published cubic term of the second slot
  const int n = 5;
  const double J = 1.0, hz = 1.0;
  const auto ising = ising_closed_traces(J, 1.0, hz, n);
  const auto l1 = cubic_2exp(ising, ActionKind::FirstOrder);
  CHECK(l1.slots[0].cubic == doctest::Approx(0.0).epsilon(1e-14));  // Tr[AB] = 0
  const double published =
      (1.0 / 12.0) * (1.0 - 1.0 / n) * J * J + hz * hz / 6.0;
  CHECK(l1.slots[1].cubic / 6.0 == doctest::Approx(published).epsilon(1e-12));

  // the norm-squared action shifts both slots by the stated additive terms
  const auto l2 = cubic_2exp(ising, ActionKind::NormSquared);
  const double chi = chi_factor(ising);
  CHECK(l2.slots[0].cubic - l1.slots[0].cubic ==
        doctest::Approx(-2.0 * chi * ising.b2).epsilon(1e-12));
  CHECK(l2.slots[1].cubic - l1.slots[1].cubic ==
        doctest::Approx(2.0 * chi * ising.ab).epsilon(1e-12));
}

TEST_CASE("three-factor cubic coefficients") {
  // Ising: published closed form
  const int n = 5;
  const double J = 1.0, hx = 1.0, hz = 1.0;
  const auto params = cubic_3exp(ising_closed_traces(J, hx, hz, n));
  CHECK(params.slots[0].linear == -0.5);
  CHECK(params.slots[1].linear == -1.0);
  const double c02_term =
      -hx * hx / 12.0 * (J * J * (n - 1) + 2 * hz * hz * n) /
      (J * J * (n - 1) + 4 * hz * hz * n);
  const double c1_term = (1.0 / 24.0) * ((1.0 - 1.0 / n) * J * J / 2.0 + hz * hz);
  CHECK(params.slots[0].cubic / 6.0 == doctest::Approx(c02_term).epsilon(1e-12));
  CHECK(params.slots[1].cubic / 6.0 == doctest::Approx(c1_term).epsilon(1e-12));

  // XXZ: published floor/ceil closed form
  const int nx = 6;
  const double J1 = 1.0, d1 = 0.9;
  const auto xxz = cubic_3exp(xxz_nn_closed_traces(J1, d1, nx));
  const double shared = J1 * J1 / 48.0 * (1 + 2 * d1 * d1) / (2 + d1 * d1) * (nx - 2);
  CHECK(xxz.slots[0].cubic / 6.0 ==
        doctest::Approx(-shared / double((nx - 1) / 2)).epsilon(1e-12));
  CHECK(xxz.slots[1].cubic / 6.0 ==
        doctest::Approx(shared / double(nx / 2)).epsilon(1e-12));
}

TEST_CASE("cubic parameters track the integrated dynamics at fourth order") {
  struct Case {
    HamiltonianSplit split;
    std::string pattern;
    CubicParams params;
  };
  const auto qim = build_qim(1.0, 1.0, 1.0, 5).reordered({"B", "A"});
  auto qim_relabel = qim;
  qim_relabel.blocks[0].name = "A";
  qim_relabel.blocks[1].name = "B";
  const auto xxz = build_xxz_nn(1.0, 0.9, 6);
  std::vector<Case> cases;
  cases.push_back({qim_relabel, "ABA", cubic_3exp(ising_closed_traces(1.0, 1.0, 1.0, 5))});
  cases.push_back({qim_relabel, "AB", cubic_2exp(ising_closed_traces(1.0, 1.0, 1.0, 5),
                                                 ActionKind::FirstOrder)});
  cases.push_back({xxz, "ABA", cubic_3exp(xxz_nn_closed_traces(1.0, 0.9, 6))});
  cases.push_back({xxz, "AB", cubic_2exp(xxz_nn_closed_traces(1.0, 0.9, 6),
                                         ActionKind::FirstOrder)});
  for (const auto& c : cases) {
    const auto ansatz = c.pattern.size() == 3
                            ? ProductAnsatz::from_pattern_palindrome(c.split, c.pattern)
                            : ProductAnsatz::from_pattern(c.split, c.pattern);
    REQUIRE(ansatz.free_count() == 2);
    std::array<double, 2> diffs{};
    const std::vector<double> ts = {0.05, 0.1};
    const auto traj = integrate_l1(ansatz, *c.split.hamiltonian, 0.1, ts);
    for (int i = 0; i < 2; ++i) {
      const double t = ts[std::size_t(i)];
      const double d0 = std::abs(traj.values[std::size_t(i)](0) - c.params.slots[0].at(t));
      const double d1 = std::abs(traj.values[std::size_t(i)](1) - c.params.slots[1].at(t));
      diffs[std::size_t(i)] = std::max(d0, d1);
    }
    // remainder consistent with an O(t^4)-O(t^5) tail
    const double ratio = diffs[1] / diffs[0];
    CHECK(ratio > 13.0);
    CHECK(ratio < 38.0);
    CHECK(diffs[1] < 5e-7);
  }
}

TEST_CASE("thermodynamic limit of the cubic coefficients") {
  // closed forms are pure arithmetic, so they evaluate at any chain length
  const auto at = [](int n) {
    return cubic_3exp(ising_closed_traces(1.0, 1.0, 1.0, n));
  };
  const double step_small = std::abs(at(128).slots[0].cubic - at(64).slots[0].cubic);
  const double step_large = std::abs(at(16).slots[0].cubic - at(8).slots[0].cubic);
  CHECK(step_small < step_large);
  CHECK(step_small < 1e-3);

  const auto xat = [](int n) {
    return cubic_3exp(xxz_nn_closed_traces(1.0, 0.9, n));
  };
  CHECK(std::abs(xat(128).slots[1].cubic - xat(127).slots[1].cubic) < 1e-2);
}

TEST_CASE("two-step split parameters on commuting blocks are exact") {
  std::vector<PauliTerm> ta = {{0.8, {{1, PauliAxis::Z}}}};
  std::vector<PauliTerm> tb = {{1.1, {{2, PauliAxis::X}}}};
  std::vector<PauliTerm> tc = {{-0.5, {{3, PauliAxis::Y}}}};
  const auto split = make_split(
      3, {{"A", std::move(ta)}, {"B", std::move(tb)}, {"C", std::move(tc)}}, {});
  const Matrix a = split.block("A").op->matrix();
  const Matrix b = split.block("B").op->matrix();
  const Matrix c = split.block("C").op->matrix();
  const auto outer = dense_record(a, Matrix(b + c));
  const auto inner = dense_record(b, c);
  const double t = 0.7;
  const auto p = three_block_two_step_params(outer, inner, t);
  CHECK(p[0] == doctest::Approx(-t / 2).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(-t).epsilon(1e-12));
  CHECK(p[3] == doctest::Approx(-t / 2).epsilon(1e-12));
  CHECK(p[4] == doctest::Approx(-t).epsilon(1e-12));
  // assembled product reproduces the exact propagator
  const auto ansatz = ProductAnsatz::from_pattern(split, "ABCBA");
  RealVector v(5);
  v << p[0], p[3], p[4], p[5], p[2];
  CHECK((ansatz.unitary(v) - exact_propagator(*split.hamiltonian, t)).norm() < 1e-12);
}

TEST_CASE("two-step split parameters against the joint trajectory") {
  const auto split = build_xxz_nnn(2.0, 0.5, 0.2, 0.2, 5);
  const auto closed = xxz_nnn_closed_traces(2.0, 0.5, 0.2, 0.2, 5);
  const auto outer = grouped_outer_traces(closed);
  const auto inner = inner_stage_traces(closed);

  const auto ansatz = ProductAnsatz::from_pattern_palindrome(split, "ABCBA");
  REQUIRE(ansatz.free_count() == 3);
  const std::vector<double> ts = {0.1};
  const auto traj = integrate_l1(ansatz, *split.hamiltonian, 0.1, ts);
  const auto p = three_block_two_step_params(outer, inner, 0.1);
  // the staged composition agrees with the joint optimum at the t^4 scale
  CHECK(std::abs(traj.values[0](0) - p[0]) < 2.5e-4);
  CHECK(std::abs(traj.values[0](1) - p[3]) < 2.5e-4);
  CHECK(std::abs(traj.values[0](2) - p[4]) < 2.5e-4);

  // linear limit
  const auto p0 = three_block_two_step_params(outer, inner, 1e-6);
  CHECK(p0[0] == doctest::Approx(-0.5e-6).epsilon(1e-6));
  CHECK(p0[1] == doctest::Approx(-1e-6).epsilon(1e-6));
  CHECK(p0[4] == doctest::Approx(-1e-6).epsilon(1e-6));
}
