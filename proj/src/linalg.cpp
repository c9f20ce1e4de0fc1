#include "povmcluster/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace povmcluster {

bool approx_equal(Complex a, Complex b, double abs_tol) {
  return std::abs(a - b) <= abs_tol;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  }
  return (a - b).cwiseAbs().maxCoeff();
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int qubit_count_for_dim(int dim) {
  if (dim < 2 || !is_power_of_two(dim)) {
    throw std::invalid_argument("dimension must be a power of two >= 2, got " +
                                std::to_string(dim));
  }
  int q = 0;
  while ((1 << q) < dim) ++q;
  return q;
}

Ket::Ket(Vector amplitudes) : v_(std::move(amplitudes)) {
  qubit_count_for_dim(static_cast<int>(v_.size()));
  if (!v_.allFinite()) throw std::invalid_argument("Ket: non-finite amplitude");
  const double n = v_.norm();
  if (std::abs(n - 1.0) > tol::norm) {
    throw std::invalid_argument("Ket: norm deviates from 1 by " +
                                std::to_string(std::abs(n - 1.0)));
  }
}

Ket Ket::normalized(Vector amplitudes) {
  const double n = amplitudes.norm();
  if (n < 1e-14) throw std::invalid_argument("Ket: cannot normalize zero vector");
  return Ket(amplitudes / n);
}

bool same_state_up_to_phase(const Ket& a, const Ket& b, double tol) {
  if (a.dim() != b.dim()) return false;
  return std::abs(std::abs(a.amplitudes().dot(b.amplitudes())) - 1.0) <= tol;
}

namespace {

void check_density_invariants(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("DensityMatrix: not square");
  qubit_count_for_dim(static_cast<int>(m.rows()));
  if (!m.allFinite()) throw std::invalid_argument("DensityMatrix: non-finite entry");
  const double herm_dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > tol::hermitian) {
    throw std::invalid_argument("DensityMatrix: Hermiticity deviation " +
                                std::to_string(herm_dev));
  }
  const double trace_dev = std::abs(m.trace() - Complex(1.0, 0.0));
  if (trace_dev > tol::trace) {
    throw std::invalid_argument("DensityMatrix: trace deviates from 1 by " +
                                std::to_string(trace_dev));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0);
  if (es.eigenvalues().minCoeff() < -tol::eigenvalue) {
    throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()));
  }
}

}  // namespace

DensityMatrix::DensityMatrix(Matrix m) : m_(std::move(m)) {
  check_density_invariants(m_);
}

DensityMatrix DensityMatrix::from_ket(const Ket& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::renormalized(Matrix m) {
  Matrix h = (m + m.adjoint()) / 2.0;
  const double tr = h.trace().real();
  if (tr <= 0.0) throw std::invalid_argument("DensityMatrix: nonpositive trace");
  return DensityMatrix(h / tr);
}

Matrix tensor(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

Vector tensor(const Vector& a, const Vector& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

Ket tensor(const Ket& a, const Ket& b) {
  return Ket(tensor(a.amplitudes(), b.amplitudes()));
}

Matrix partial_trace(const Matrix& m, int traced_qubit) {
  if (m.rows() != 4 || m.cols() != 4) {
    throw std::invalid_argument("partial_trace: expected a 4x4 matrix");
  }
  if (traced_qubit != 1 && traced_qubit != 2) {
    throw std::invalid_argument("partial_trace: traced_qubit must be 1 or 2");
  }
  Matrix out = Matrix::Zero(2, 2);
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      for (int i = 0; i < 2; ++i) {
        if (traced_qubit == 1) {
          out(j, k) += m(2 * i + j, 2 * i + k);
        } else {
          out(j, k) += m(2 * j + i, 2 * k + i);
        }
      }
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, int traced_qubit) {
  return DensityMatrix::renormalized(partial_trace(rho.matrix(), traced_qubit));
}

Matrix psd_sqrt(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("psd_sqrt: not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double herm_dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > tol::hermitian * scale) {
    throw std::invalid_argument("psd_sqrt: non-Hermitian input, deviation " +
                                std::to_string(herm_dev));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0);
  Eigen::VectorXd ev = es.eigenvalues();
  // Eigenvalues at rounding level are true zeros; sqrt would promote them
  // to ~1e-8 of spurious rank otherwise.
  const double floor = 1e-13 * std::max(0.0, ev.maxCoeff());
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tol::eigenvalue * scale) {
      throw std::invalid_argument("psd_sqrt: eigenvalue " + std::to_string(ev(i)) +
                                  " below tolerance");
    }
    ev(i) = ev(i) > floor ? std::sqrt(ev(i)) : 0.0;
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix conjugate_entrywise(const Matrix& m) { return m.conjugate(); }

Matrix lift_to_qubit(const Matrix& u, int qubit, int n_qubits) {
  if (u.rows() != 2 || u.cols() != 2) {
    throw std::invalid_argument("lift_to_qubit: expected a single-qubit operator");
  }
  if (qubit < 1 || qubit > n_qubits) {
    throw std::invalid_argument("lift_to_qubit: qubit index out of range");
  }
  const int left = 1 << (qubit - 1);
  const int right = 1 << (n_qubits - qubit);
  return tensor(tensor(Matrix::Identity(left, left), u),
                Matrix::Identity(right, right));
}

namespace gates {

const Matrix& identity() {
  static const Matrix m = Matrix::Identity(2, 2);
  return m;
}

const Matrix& x() {
  static const Matrix m = (Matrix(2, 2) << 0, 1, 1, 0).finished();
  return m;
}

const Matrix& y() {
  static const Matrix m =
      (Matrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
  return m;
}

const Matrix& z() {
  static const Matrix m = (Matrix(2, 2) << 1, 0, 0, -1).finished();
  return m;
}

const Matrix& h() {
  static const Matrix m = ((x() + z()) / std::sqrt(2.0)).eval();
  return m;
}

const Matrix& cz() {
  static const Matrix m = [] {
    Matrix c = Matrix::Identity(4, 4);
    c(3, 3) = -1;
    return c;
  }();
  return m;
}

Matrix z_rotation(double beta) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = std::exp(Complex(0, beta / 2.0));
  m(1, 1) = std::exp(Complex(0, -beta / 2.0));
  return m;
}

Matrix x_rotation(double beta) { return h() * z_rotation(beta) * h(); }

Matrix by_name(const std::string& name) {
  if (name == "X") return x();
  if (name == "Y") return y();
  if (name == "Z") return z();
  if (name == "H") return h();
  if (name == "CZ") return cz();
  if (name == "I") return identity();
  throw std::invalid_argument("unknown gate name: " + name);
}

}  // namespace gates

namespace states {

namespace {
Ket two_level(Complex a0, Complex a1) {
  Vector v(2);
  v << a0, a1;
  return Ket::normalized(std::move(v));
}
}  // namespace

Ket zero() { return two_level(1, 0); }
Ket one() { return two_level(0, 1); }
Ket plus() { return two_level(1, 1); }
Ket minus() { return two_level(1, -1); }
Ket right_circular() { return two_level(1, Complex(0, 1)); }
Ket left_circular() { return two_level(1, Complex(0, -1)); }

Ket alpha_plus(double alpha) {
  return two_level(1, std::exp(Complex(0, alpha)));
}

Ket alpha_minus(double alpha) {
  return two_level(1, -std::exp(Complex(0, alpha)));
}

Ket chi(double phi, double gamma) {
  return two_level(std::cos(phi / 2.0),
                   Complex(0, -1) * std::exp(Complex(0, gamma)) * std::sin(phi / 2.0));
}

Ket psi(double phi, double theta) {
  return two_level(std::cos(phi / 2.0),
                   std::exp(Complex(0, theta)) * std::sin(phi / 2.0));
}

Ket phi_plus() {
  Vector v = Vector::Zero(4);
  v(0) = 1;
  v(3) = 1;
  return Ket::normalized(std::move(v));
}

Ket phi_minus() {
  Vector v = Vector::Zero(4);
  v(0) = 1;
  v(3) = -1;
  return Ket::normalized(std::move(v));
}

Ket linear_cluster(int n) {
  if (n != 2 && n != 3) {
    throw std::invalid_argument("linear_cluster: n must be 2 or 3");
  }
  Vector v = Vector::Constant(1 << n, 1.0);
  // CZ between neighbors: flip sign where adjacent bits are both 1.
  for (int edge = 0; edge + 1 < n; ++edge) {
    const int b1 = n - 1 - edge;
    const int b2 = n - 2 - edge;
    for (int i = 0; i < (1 << n); ++i) {
      if (((i >> b1) & 1) && ((i >> b2) & 1)) v(i) = -v(i);
    }
  }
  return Ket::normalized(std::move(v));
}

}  // namespace states

}  // namespace povmcluster
