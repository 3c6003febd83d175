#pragma once

#include <span>

#include "varprop/ansatz.hpp"
#include "varprop/ode.hpp"

namespace varprop {

/// Trace domain for the variational equations: the full Hilbert space or the
/// span of an orthonormal Krylov basis.
struct TraceScope {
  enum class Mode { Full, Krylov };
  Mode mode = Mode::Full;
  Matrix basis;  // dim x m, orthonormal columns (Krylov mode only)

  static TraceScope full() { return {}; }
  static TraceScope krylov(Matrix basis_columns);
  bool is_full() const { return mode == Mode::Full; }
  Eigen::Index size() const { return mode == Mode::Full ? -1 : basis.cols(); }
};

/// Orthonormal basis of span{psi0, H psi0, ..., H^(n-1) psi0} by modified
/// Gram-Schmidt with re-orthogonalization. Vectors whose post-projection norm
/// falls below 1e-10 terminate the basis early.
TraceScope krylov_basis(const Generator& h, const Vector& psi0, int n_vectors);

/// g_jk = Tr_scope[(dU/dc_j)^dag (dU/dc_k)] over free slots j, k.
Matrix geometric_tensor(const ProductAnsatz& ansatz, const RealVector& c,
                        const TraceScope& scope = TraceScope::full());

/// F_j = Tr_scope[(dU/dc_j)^dag H U].
Vector force_vector(const ProductAnsatz& ansatz, const RealVector& c,
                    const Generator& h,
                    const TraceScope& scope = TraceScope::full());

struct EomOptions {
  double svd_cutoff = 1e-10;        // relative to largest singular value
  double imag_tol = -1.0;           // < 0: default per scope (1e-8 full, 0.5 Krylov)
};

class EomConsistencyError : public std::runtime_error {
 public:
  EomConsistencyError(double residue, double bound)
      : std::runtime_error("imaginary residue " + std::to_string(residue) +
                           " exceeds bound " + std::to_string(bound) +
                           " (invalid ansatz/Hamiltonian pairing?)"),
        residue(residue) {}
  double residue;
};

struct EomResult {
  RealVector cdot;
  double imag_residue = 0.0;   // max |Im| of the linear-solve solution
  double g_asymmetry = 0.0;    // max |g - g^dag| before symmetrization
};

/// Solves g cdot = -iF by SVD pseudo-inverse (minimum-norm where singular),
/// asserts the solution is real to tolerance and discards the imaginary part.
EomResult eom_rhs_l1(const ProductAnsatz& ansatz, const RealVector& c,
                     const Generator& h,
                     const TraceScope& scope = TraceScope::full(),
                     const EomOptions& options = {});

/// ||i dU/dt - H U||_F with dU/dt = sum_j (dU/dc_j) cdot_j.
double residual_norm(const ProductAnsatz& ansatz, const RealVector& c,
                     const RealVector& cdot, const Generator& h);

struct IntegrateOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  EomOptions eom;
  long max_steps = 1000000;
};

struct ParameterTrajectory {
  std::vector<double> times;
  std::vector<RealVector> values;       // free-slot values
  std::vector<double> residuals;        // ||i Udot - HU||_F at each sample
  std::vector<double> rhs_imag_max;     // solve residue at each sample
  long steps = 0;
  long rejects = 0;
  double max_imag_residue = 0.0;        // over every RHS evaluation
  double max_g_asymmetry = 0.0;

  const RealVector& back() const { return values.back(); }
  /// Value at a grid time (exact lookup within 1e-12).
  const RealVector& at_time(double t) const;
};

/// Integrates the first-order equations of motion from c(0) = 0 with
/// dense-output sampling on `grid` (ascending, within [0, t_end]).
ParameterTrajectory integrate_l1(const ProductAnsatz& ansatz, const Generator& h,
                                 double t_end, std::span<const double> grid,
                                 const IntegrateOptions& options = {},
                                 const TraceScope& scope = TraceScope::full());

/// Second-order equations of motion (norm-squared action), reduced to first
/// order; cdot(0) comes from the first-order solve at t = 0. Full trace only.
ParameterTrajectory integrate_l2(const ProductAnsatz& ansatz, const Generator& h,
                                 double t_end, std::span<const double> grid,
                                 const IntegrateOptions& options = {});

struct OrderingRank {
  std::size_t candidate_index = 0;
  double mean_residual = 0.0;
  bool ok = false;
  std::string error;
};

/// Integrates each candidate to tau and ranks by time-averaged residual_norm
/// (uniform 17-point grid); failed candidates sort last. Stable order breaks ties.
std::vector<OrderingRank> select_ordering(std::span<const ProductAnsatz> candidates,
                                          const Generator& h, double tau,
                                          const IntegrateOptions& options = {});

/// M_z after 0, 1, ..., n_steps applications of u_step (length n_steps + 1).
std::vector<double> magnetization_trajectory(const Vector& psi0,
                                             const Matrix& u_step, int n_steps,
                                             int n_qubits);

}  // namespace varprop
