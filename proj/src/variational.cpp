#include "varprop/variational.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace varprop {

namespace {

constexpr Complex kI{0.0, 1.0};

// Frobenius inner product Tr[X^dag Y] without forming the product.
Complex frob_inner(const Matrix& x, const Matrix& y) {
  return (x.conjugate().cwiseProduct(y)).sum();
}

// Factor exponentials with cached prefix/suffix products, plus the derivative
// of the full product with respect to every free slot.
struct DerivativeSet {
  Matrix u;                 // full product
  std::vector<Matrix> d;    // dU/dc_j, one per free slot
  // retained for second-derivative work
  std::vector<Matrix> e;    // factor exponentials
  std::vector<Matrix> pre;  // pre[f] = E_0 ... E_{f-1}
  std::vector<Matrix> suf;  // suf[f] = E_f ... E_{M-1}
  std::vector<Matrix> t;    // T_f = i B_f E_f
};

DerivativeSet build_derivatives(const ProductAnsatz& ansatz, const RealVector& c) {
  const auto values = ansatz.slot_values(c);
  const int m = ansatz.factor_count();
  const Eigen::Index dim = ansatz.dim();

  DerivativeSet ws;
  ws.e.resize(std::size_t(m));
  ws.t.resize(std::size_t(m));
  for (int f = 0; f < m; ++f) {
    const auto& block = ansatz.factor_block(f);
    const double theta = values[std::size_t(ansatz.factors()[std::size_t(f)].slot)];
    ws.e[std::size_t(f)] = block.op->exp_itheta(theta);
    ws.t[std::size_t(f)] = kI * (block.op->matrix() * ws.e[std::size_t(f)]);
  }

  ws.pre.resize(std::size_t(m) + 1);
  ws.pre[0] = Matrix::Identity(dim, dim);
  for (int f = 0; f < m; ++f) ws.pre[std::size_t(f) + 1] = ws.pre[std::size_t(f)] * ws.e[std::size_t(f)];
  ws.suf.resize(std::size_t(m) + 1);
  ws.suf[std::size_t(m)] = Matrix::Identity(dim, dim);
  for (int f = m - 1; f >= 0; --f)
    ws.suf[std::size_t(f)] = ws.e[std::size_t(f)] * ws.suf[std::size_t(f) + 1];
  ws.u = ws.pre[std::size_t(m)];

  const auto& free_slots = ansatz.free_slots();
  ws.d.assign(free_slots.size(), Matrix::Zero(dim, dim));
  for (int f = 0; f < m; ++f) {
    const int slot = ansatz.factors()[std::size_t(f)].slot;
    const auto it = std::find(free_slots.begin(), free_slots.end(), slot);
    if (it == free_slots.end()) continue;  // fixed slot: no derivative
    const std::size_t j = std::size_t(it - free_slots.begin());
    ws.d[j] += ws.pre[std::size_t(f)] * ws.t[std::size_t(f)] * ws.suf[std::size_t(f) + 1];
  }
  return ws;
}

struct EomTerms {
  Matrix g;
  Vector force;
  double g_asymmetry = 0.0;
};

EomTerms eom_terms(const DerivativeSet& ws, const Generator& h,
                   const TraceScope& scope) {
  const int n = int(ws.d.size());
  EomTerms terms;
  terms.g.resize(n, n);
  terms.force.resize(n);
  if (scope.is_full()) {
    const Matrix hu = h.matrix() * ws.u;
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k)
        terms.g(j, k) = frob_inner(ws.d[std::size_t(j)], ws.d[std::size_t(k)]);
      terms.force(j) = frob_inner(ws.d[std::size_t(j)], hu);
    }
  } else {
    std::vector<Matrix> w(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) w[std::size_t(j)] = ws.d[std::size_t(j)] * scope.basis;
    const Matrix huk = h.matrix() * (ws.u * scope.basis);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k)
        terms.g(j, k) = frob_inner(w[std::size_t(j)], w[std::size_t(k)]);
      terms.force(j) = frob_inner(w[std::size_t(j)], huk);
    }
  }
  terms.g_asymmetry = (terms.g - terms.g.adjoint()).cwiseAbs().maxCoeff();
  terms.g = 0.5 * (terms.g + terms.g.adjoint().eval());
  return terms;
}

// Minimum-norm solve of g x = rhs with singular values below
// cutoff * sigma_max treated as zero.
Vector pinv_solve(const Matrix& g, const Vector& rhs, double cutoff) {
  Eigen::JacobiSVD<Matrix> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  Vector z = svd.matrixU().adjoint() * rhs;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    z(i) = (sv(i) > cutoff * smax) ? z(i) / sv(i) : Complex(0.0, 0.0);
  return svd.matrixV() * z;
}

struct SolveOutcome {
  RealVector real_part;
  double imag_residue;
};

SolveOutcome project_real(const Vector& sol, double imag_tol) {
  const double max_re = sol.real().cwiseAbs().maxCoeff();
  const double max_im = sol.imag().cwiseAbs().maxCoeff();
  const double bound = imag_tol * (1.0 + max_re);
  if (max_im >= bound) throw EomConsistencyError(max_im, bound);
  return {sol.real(), max_im};
}

double default_imag_tol(const TraceScope& scope) {
  // The full-trace first-order system is consistent on real trajectories, so
  // anything above round-off flags a broken pairing. Partial traces project
  // the dynamics; their solve carries a structural imaginary part that is
  // method error, recorded but only sanity-bounded.
  return scope.is_full() ? 1e-8 : 0.5;
}

}  // namespace

TraceScope TraceScope::krylov(Matrix basis_columns) {
  const Matrix gram = basis_columns.adjoint() * basis_columns;
  const Eigen::Index m = basis_columns.cols();
  if ((gram - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("TraceScope::krylov: basis not orthonormal");
  TraceScope scope;
  scope.mode = Mode::Krylov;
  scope.basis = std::move(basis_columns);
  return scope;
}

TraceScope krylov_basis(const Generator& h, const Vector& psi0, int n_vectors) {
  if (psi0.norm() < 1e-14)
    throw std::invalid_argument("krylov_basis: zero initial vector");
  if (n_vectors < 1 || n_vectors > h.dim())
    throw std::invalid_argument("krylov_basis: requested size out of range");
  std::vector<Vector> basis;
  Vector v = psi0;
  for (int k = 0; k < n_vectors; ++k) {
    Vector w = v;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) w -= (q.adjoint() * w)(0) * q;
    const double norm = w.norm();
    if (norm < 1e-10) break;
    basis.push_back(w / norm);
    v = h.matrix() * basis.back();
  }
  Matrix columns(psi0.size(), Eigen::Index(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k)
    columns.col(Eigen::Index(k)) = basis[k];
  return TraceScope::krylov(std::move(columns));
}

Matrix geometric_tensor(const ProductAnsatz& ansatz, const RealVector& c,
                        const TraceScope& scope) {
  const auto ws = build_derivatives(ansatz, c);
  const int n = int(ws.d.size());
  Matrix g(n, n);
  if (scope.is_full()) {
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        g(j, k) = frob_inner(ws.d[std::size_t(j)], ws.d[std::size_t(k)]);
  } else {
    std::vector<Matrix> w(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) w[std::size_t(j)] = ws.d[std::size_t(j)] * scope.basis;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        g(j, k) = frob_inner(w[std::size_t(j)], w[std::size_t(k)]);
  }
  return g;
}

Vector force_vector(const ProductAnsatz& ansatz, const RealVector& c,
                    const Generator& h, const TraceScope& scope) {
  const auto ws = build_derivatives(ansatz, c);
  const int n = int(ws.d.size());
  Vector force(n);
  if (scope.is_full()) {
    const Matrix hu = h.matrix() * ws.u;
    for (int j = 0; j < n; ++j) force(j) = frob_inner(ws.d[std::size_t(j)], hu);
  } else {
    const Matrix huk = h.matrix() * (ws.u * scope.basis);
    for (int j = 0; j < n; ++j)
      force(j) = frob_inner(ws.d[std::size_t(j)] * scope.basis, huk);
  }
  return force;
}

EomResult eom_rhs_l1(const ProductAnsatz& ansatz, const RealVector& c,
                     const Generator& h, const TraceScope& scope,
                     const EomOptions& options) {
  const auto ws = build_derivatives(ansatz, c);
  auto terms = eom_terms(ws, h, scope);
  const Vector sol = pinv_solve(terms.g, -kI * terms.force, options.svd_cutoff);
  const double tol = options.imag_tol >= 0.0 ? options.imag_tol : default_imag_tol(scope);
  auto outcome = project_real(sol, tol);
  return {std::move(outcome.real_part), outcome.imag_residue, terms.g_asymmetry};
}

double residual_norm(const ProductAnsatz& ansatz, const RealVector& c,
                     const RealVector& cdot, const Generator& h) {
  const auto ws = build_derivatives(ansatz, c);
  Matrix udot = Matrix::Zero(ansatz.dim(), ansatz.dim());
  for (std::size_t j = 0; j < ws.d.size(); ++j) udot += cdot(Eigen::Index(j)) * ws.d[j];
  return (kI * udot - h.matrix() * ws.u).norm();
}

const RealVector& ParameterTrajectory::at_time(double t) const {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - t) < 1e-12 * (1.0 + std::abs(t))) return values[i];
  throw std::out_of_range("trajectory has no sample at t = " + std::to_string(t));
}

namespace {

void check_grid(double t_end, std::span<const double> grid) {
  double prev = -1.0;
  for (double t : grid) {
    if (t < 0.0 || t > t_end * (1.0 + 1e-12))
      throw std::invalid_argument("sample grid leaves [0, t_end]");
    if (t < prev) throw std::invalid_argument("sample grid must be ascending");
    prev = t;
  }
}

}  // namespace

ParameterTrajectory integrate_l1(const ProductAnsatz& ansatz, const Generator& h,
                                 double t_end, std::span<const double> grid,
                                 const IntegrateOptions& options,
                                 const TraceScope& scope) {
  if (t_end <= 0.0) throw std::invalid_argument("integrate_l1: t_end <= 0");
  check_grid(t_end, grid);
  ParameterTrajectory traj;

  auto rhs = [&](double, const RealVector& c) {
    auto r = eom_rhs_l1(ansatz, c, h, scope, options.eom);
    traj.max_imag_residue = std::max(traj.max_imag_residue, r.imag_residue);
    traj.max_g_asymmetry = std::max(traj.max_g_asymmetry, r.g_asymmetry);
    return r.cdot;
  };
  auto on_sample = [&](double t, const RealVector& c) {
    auto r = eom_rhs_l1(ansatz, c, h, scope, options.eom);
    traj.times.push_back(t);
    traj.values.push_back(c);
    traj.residuals.push_back(residual_norm(ansatz, c, r.cdot, h));
    traj.rhs_imag_max.push_back(r.imag_residue);
  };

  OdeOptions ode;
  ode.rtol = options.rtol;
  ode.atol = options.atol;
  ode.max_steps = options.max_steps;
  OdeStats stats;
  RealVector y0 = RealVector::Zero(ansatz.free_count());
  RealVector y_end =
      integrate_dopri5(rhs, y0, 0.0, t_end, grid, on_sample, ode, &stats);
  traj.steps = stats.accepted;
  traj.rejects = stats.rejected;
  if (grid.empty() || std::abs(grid.back() - t_end) > 1e-12 * (1.0 + t_end))
    on_sample(t_end, y_end);
  return traj;
}

ParameterTrajectory integrate_l2(const ProductAnsatz& ansatz, const Generator& h,
                                 double t_end, std::span<const double> grid,
                                 const IntegrateOptions& options) {
  if (t_end <= 0.0) throw std::invalid_argument("integrate_l2: t_end <= 0");
  check_grid(t_end, grid);
  const int n = ansatz.free_count();
  const Eigen::Index dim = ansatz.dim();
  const Matrix h2 = h.matrix() * h.matrix();

  // The second-order solve is consistent only up to the ansatz' representation
  // error, so its imaginary residue is a diagnostic, not a round-off bound.
  EomOptions eom = options.eom;
  if (eom.imag_tol < 0.0) eom.imag_tol = 1e-2;

  ParameterTrajectory traj;

  auto accel = [&](const RealVector& c, const RealVector& cdot) {
    const auto ws = build_derivatives(ansatz, c);
    auto terms = eom_terms(ws, h, TraceScope::full());

    // Per-factor velocity: w_f = cdot of the factor's slot (0 when fixed).
    const int m = ansatz.factor_count();
    const auto& free_slots = ansatz.free_slots();
    std::vector<double> w(std::size_t(m), 0.0);
    for (int f = 0; f < m; ++f) {
      const int slot = ansatz.factors()[std::size_t(f)].slot;
      const auto it = std::find(free_slots.begin(), free_slots.end(), slot);
      if (it != free_slots.end()) w[std::size_t(f)] = cdot(it - free_slots.begin());
    }

    // Second directional derivative sum_{lk} (d2U/dc_l dc_k) cdot_l cdot_k,
    // accumulated as 2 * sum_{f<g} P_f T_f (E..) T_g S_{g+1} + diagonal terms.
    Matrix udd = Matrix::Zero(dim, dim);
    Matrix scan = Matrix::Zero(dim, dim);  // sum_{f<g} P_f (w_f T_f) E_{f+1}..E_{g-1}
    for (int g_idx = 0; g_idx < m; ++g_idx) {
      const std::size_t gf = std::size_t(g_idx);
      if (g_idx > 0) {
        scan = scan * ws.e[gf - 1];
        scan += ws.pre[gf - 1] * (w[gf - 1] * ws.t[gf - 1]);
      }
      if (w[gf] != 0.0) {
        udd += 2.0 * (scan * (w[gf] * ws.t[gf])) * ws.suf[gf + 1];
        const Matrix diag_core =
            (kI * w[gf] * w[gf]) * (ansatz.factor_block(g_idx).op->matrix() * ws.t[gf]);
        udd += ws.pre[gf] * diag_core * ws.suf[gf + 1];
      }
    }

    Matrix udot = Matrix::Zero(dim, dim);
    for (std::size_t j = 0; j < ws.d.size(); ++j) udot += cdot(Eigen::Index(j)) * ws.d[j];
    const Matrix h_udot = h.matrix() * udot;
    const Matrix h2_u = h2 * ws.u;

    Vector rhs(n);
    for (int j = 0; j < n; ++j) {
      const Complex gamma = frob_inner(ws.d[std::size_t(j)], udd);
      const Complex bdot = frob_inner(ws.d[std::size_t(j)], h_udot);
      const Complex f2 = -frob_inner(ws.d[std::size_t(j)], h2_u);
      rhs(j) = -(gamma + 2.0 * kI * bdot + f2);
    }
    const Vector sol = pinv_solve(terms.g, rhs, eom.svd_cutoff);
    auto outcome = project_real(sol, eom.imag_tol);
    traj.max_imag_residue = std::max(traj.max_imag_residue, outcome.imag_residue);
    traj.max_g_asymmetry = std::max(traj.max_g_asymmetry, terms.g_asymmetry);
    return outcome;
  };

  auto rhs = [&](double, const RealVector& y) {
    const RealVector c = y.head(n);
    const RealVector cdot = y.tail(n);
    RealVector dy(2 * n);
    dy.head(n) = cdot;
    dy.tail(n) = accel(c, cdot).real_part;
    return dy;
  };
  auto on_sample = [&](double t, const RealVector& y) {
    const RealVector c = y.head(n);
    const RealVector cdot = y.tail(n);
    traj.times.push_back(t);
    traj.values.push_back(c);
    traj.residuals.push_back(residual_norm(ansatz, c, cdot, h));
    traj.rhs_imag_max.push_back(traj.max_imag_residue);
  };

  EomOptions l1opts = options.eom;
  const RealVector cdot0 =
      eom_rhs_l1(ansatz, RealVector::Zero(n), h, TraceScope::full(), l1opts).cdot;
  RealVector y0(2 * n);
  y0.head(n).setZero();
  y0.tail(n) = cdot0;

  OdeOptions ode;
  ode.rtol = options.rtol;
  ode.atol = options.atol;
  ode.max_steps = options.max_steps;
  OdeStats stats;
  RealVector y_end = integrate_dopri5(rhs, y0, 0.0, t_end, grid, on_sample, ode, &stats);
  traj.steps = stats.accepted;
  traj.rejects = stats.rejected;
  if (grid.empty() || std::abs(grid.back() - t_end) > 1e-12 * (1.0 + t_end))
    on_sample(t_end, y_end);
  return traj;
}

std::vector<OrderingRank> select_ordering(std::span<const ProductAnsatz> candidates,
                                          const Generator& h, double tau,
                                          const IntegrateOptions& options) {
  if (candidates.size() < 2)
    throw std::invalid_argument("select_ordering: need at least two candidates");
  constexpr int kSamples = 17;
  std::vector<double> grid(kSamples);
  for (int i = 0; i < kSamples; ++i) grid[std::size_t(i)] = tau * double(i) / (kSamples - 1);

  std::vector<OrderingRank> ranks;
  for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
    OrderingRank rank;
    rank.candidate_index = idx;
    try {
      const auto traj = integrate_l1(candidates[idx], h, tau, grid, options);
      double acc = 0.0;
      for (double r : traj.residuals) acc += r;
      rank.mean_residual = acc / double(traj.residuals.size());
      rank.ok = true;
    } catch (const std::exception& e) {
      rank.ok = false;
      rank.error = e.what();
      rank.mean_residual = std::numeric_limits<double>::infinity();
    }
    ranks.push_back(std::move(rank));
  }
  std::stable_sort(ranks.begin(), ranks.end(),
                   [](const OrderingRank& a, const OrderingRank& b) {
                     return a.mean_residual < b.mean_residual;
                   });
  return ranks;
}

std::vector<double> magnetization_trajectory(const Vector& psi0,
                                             const Matrix& u_step, int n_steps,
                                             int n_qubits) {
  if (std::abs(psi0.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("magnetization_trajectory: state not normalized");
  std::vector<double> out;
  out.reserve(std::size_t(n_steps) + 1);
  Vector psi = psi0;
  out.push_back(magnetization(psi, n_qubits));
  for (int s = 0; s < n_steps; ++s) {
    psi = u_step * psi;
    out.push_back(magnetization(psi, n_qubits));
  }
  return out;
}

}  // namespace varprop
