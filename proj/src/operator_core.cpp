#include "varprop/operator_core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cstring>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

namespace varprop {

PauliAxis pauli_axis_from_char(char c) {
  switch (c) {
    case 'x': case 'X': return PauliAxis::X;
    case 'y': case 'Y': return PauliAxis::Y;
    case 'z': case 'Z': return PauliAxis::Z;
  }
  throw std::invalid_argument(std::string("unknown Pauli axis '") + c + "'");
}

char pauli_axis_to_char(PauliAxis axis) {
  switch (axis) {
    case PauliAxis::X: return 'x';
    case PauliAxis::Y: return 'y';
    case PauliAxis::Z: return 'z';
  }
  return '?';
}

Matrix pauli_matrix(PauliAxis axis) {
  Matrix m(2, 2);
  const Complex i(0.0, 1.0);
  switch (axis) {
    case PauliAxis::X: m << 0, 1, 1, 0; break;
    case PauliAxis::Y: m << 0, -i, i, 0; break;
    case PauliAxis::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

Matrix pauli_site_operator(PauliAxis axis, int site, int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw std::invalid_argument("qubit count out of range [1, " +
                                std::to_string(kMaxQubits) + "]");
  if (site < 1 || site > n_qubits)
    throw std::invalid_argument("site " + std::to_string(site) +
                                " out of range [1, " +
                                std::to_string(n_qubits) + "]");
  const Matrix sigma = pauli_matrix(axis);
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  Matrix out = Matrix::Zero(dim, dim);
  // Site k+1 lives on bit k counted from the most significant end.
  const Eigen::Index left = Eigen::Index(1) << (site - 1);
  const Eigen::Index right = Eigen::Index(1) << (n_qubits - site);
  for (Eigen::Index l = 0; l < left; ++l)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        if (sigma(a, b) == Complex(0, 0)) continue;
        for (Eigen::Index r = 0; r < right; ++r)
          out((l * 2 + a) * right + r, (l * 2 + b) * right + r) = sigma(a, b);
      }
  return out;
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() < tol;
}

bool is_unitary(const Matrix& m, double tol_scale) {
  if (m.rows() != m.cols()) return false;
  const Eigen::Index d = m.rows();
  const double dev = (m.adjoint() * m - Matrix::Identity(d, d)).norm();
  return dev < tol_scale * std::sqrt(double(d));
}

double frobenius_error(const Matrix& u, const Matrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw std::invalid_argument("frobenius_error: dimension mismatch");
  return (u - v).norm() / (2.0 * std::sqrt(double(u.rows())));
}

Matrix polar_unitary(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

Matrix unitary_power(const Matrix& u, long n, long reunitarize_every) {
  if (n < 0) throw std::invalid_argument("unitary_power: negative exponent");
  Matrix acc = Matrix::Identity(u.rows(), u.cols());
  for (long k = 1; k <= n; ++k) {
    acc = acc * u;
    if (reunitarize_every > 0 && k % reunitarize_every == 0)
      acc = polar_unitary(acc);
  }
  return acc;
}

double strob_frobenius_error(const Matrix& h, const Matrix& u_step, double tau,
                             long n) {
  if (n < 1) throw std::invalid_argument("strob_frobenius_error: n must be >= 1");
  const Generator gen(h);
  const Matrix target = gen.exp_itheta(-tau * double(n));
  return frobenius_error(target, unitary_power(u_step, n));
}

Generator::Generator(Matrix m, double hermitian_tol) : mat_(std::move(m)) {
  if (mat_.rows() != mat_.cols())
    throw std::invalid_argument("Generator: matrix must be square");
  if (!is_hermitian(mat_, hermitian_tol))
    throw std::invalid_argument("Generator: matrix is not Hermitian");
}

void Generator::ensure_eig() const {
  std::call_once(eig_once_, [this] {
    Eigen::SelfAdjointEigenSolver<Matrix> es(mat_);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("Generator: eigendecomposition failed");
    evals_ = es.eigenvalues();
    evecs_ = es.eigenvectors();
  });
}

const RealVector& Generator::eigenvalues() const {
  ensure_eig();
  return evals_;
}

const Matrix& Generator::eigenvectors() const {
  ensure_eig();
  return evecs_;
}

Matrix Generator::exp_itheta(double theta) const {
  ensure_eig();
  const Complex i(0.0, 1.0);
  Vector phases(evals_.size());
  for (Eigen::Index k = 0; k < evals_.size(); ++k)
    phases(k) = std::exp(i * theta * evals_(k));
  return evecs_ * phases.asDiagonal() * evecs_.adjoint();
}

namespace {

std::size_t matrix_hash(const Matrix& m) {
  std::size_t h = std::hash<Eigen::Index>{}(m.rows());
  const auto* data = reinterpret_cast<const unsigned char*>(m.data());
  const std::size_t bytes = sizeof(Complex) * std::size_t(m.size());
  // FNV-1a over the raw entries
  std::size_t acc = 1469598103934665603ull;
  for (std::size_t k = 0; k < bytes; ++k) {
    acc ^= data[k];
    acc *= 1099511628211ull;
  }
  return h ^ acc;
}

struct GeneratorCache {
  std::shared_mutex mutex;
  std::unordered_map<std::size_t, std::vector<GeneratorPtr>> table;
};

GeneratorCache& generator_cache() {
  static GeneratorCache cache;
  return cache;
}

}  // namespace

GeneratorPtr cached_generator(const Matrix& h) {
  auto& cache = generator_cache();
  const std::size_t key = matrix_hash(h);
  {
    std::shared_lock lock(cache.mutex);
    auto it = cache.table.find(key);
    if (it != cache.table.end())
      for (const auto& gen : it->second)
        if (gen->matrix().rows() == h.rows() && gen->matrix() == h) return gen;
  }
  auto gen = std::make_shared<const Generator>(h);
  std::unique_lock lock(cache.mutex);
  auto& bucket = cache.table[key];
  for (const auto& existing : bucket)
    if (existing->matrix().rows() == h.rows() && existing->matrix() == h)
      return existing;
  bucket.push_back(gen);
  return gen;
}

Matrix matexp_hermitian(const Matrix& h, double theta) {
  return cached_generator(h)->exp_itheta(theta);
}

}  // namespace varprop
