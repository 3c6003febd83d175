#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace varprop {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Largest supported chain length; dense storage caps out at dim 4096.
inline constexpr int kMaxQubits = 12;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kUnitaryTolScale = 1e-10;

enum class PauliAxis { X, Y, Z };

PauliAxis pauli_axis_from_char(char c);
char pauli_axis_to_char(PauliAxis axis);

/// 2x2 Pauli matrix for the given axis.
Matrix pauli_matrix(PauliAxis axis);

/// I ⊗ ... ⊗ σ^axis ⊗ ... ⊗ I with the Pauli at `site` (1-based,
/// site 1 = leftmost tensor factor = most significant bit).
Matrix pauli_site_operator(PauliAxis axis, int site, int n_qubits);

bool is_hermitian(const Matrix& m, double tol = kHermitianTol);
bool is_unitary(const Matrix& m, double tol_scale = kUnitaryTolScale);

/// ||U - V||_F / (2 sqrt(D)). Lies in [0, 1] for unitaries of equal dimension.
double frobenius_error(const Matrix& u, const Matrix& v);

/// ||U(n tau) - U_step^n||_F / (2 sqrt(D)) with U(t) = exp(-iHt).
double strob_frobenius_error(const Matrix& h, const Matrix& u_step, double tau,
                             long n);

/// U^n by repeated multiplication, re-unitarized by polar projection every
/// `reunitarize_every` multiplications to keep round-off out of long products.
Matrix unitary_power(const Matrix& u, long n, long reunitarize_every = 50);

/// Nearest unitary in Frobenius norm (polar factor via SVD).
Matrix polar_unitary(const Matrix& m);

/// A Hermitian operator together with its lazily computed eigendecomposition.
/// exp(i theta H) = V diag(exp(i theta lambda)) V^dagger reuses the cached
/// (V, lambda) across theta values. Safe for concurrent reads; the
/// decomposition is computed once.
class Generator {
 public:
  explicit Generator(Matrix m, double hermitian_tol = kHermitianTol);

  const Matrix& matrix() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }

  /// exp(i theta H)
  Matrix exp_itheta(double theta) const;

  const RealVector& eigenvalues() const;
  const Matrix& eigenvectors() const;

 private:
  void ensure_eig() const;

  Matrix mat_;
  mutable std::once_flag eig_once_;
  mutable RealVector evals_;
  mutable Matrix evecs_;
};

using GeneratorPtr = std::shared_ptr<const Generator>;

/// exp(i theta H) for Hermitian H. Decompositions are memoized in a global
/// table keyed by matrix contents, so repeated calls with the same generator
/// and different theta reuse one eigendecomposition.
Matrix matexp_hermitian(const Matrix& h, double theta);

/// Shared-cache lookup used by matexp_hermitian; exposed so callers holding a
/// matrix can obtain the cached Generator directly.
GeneratorPtr cached_generator(const Matrix& h);

}  // namespace varprop
