#pragma once

#include <complex>
#include <Eigen/Dense>

// Dense complex linear algebra over small qubit registers, plus the standard
// state and gate catalog used throughout the library.
//
// Conventions, fixed once and used everywhere:
//   - |0> = |H> (horizontal), |1> = |V> (vertical).
//   - Qubit 1 is the most significant bit of the basis index: for two qubits,
//     index = 2*b1 + b2, so |b1 b2> = tensor(|b1>, |b2>).
//   - Kets are compared up to global phase (|<a|b>| = 1); density matrices
//     are compared entrywise.

namespace povmcluster {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Operator = Eigen::MatrixXcd;

namespace tol {
inline constexpr double scalar_eq = 1e-12;
inline constexpr double norm = 1e-10;
inline constexpr double hermitian = 1e-10;
inline constexpr double eigenvalue = 1e-10;
inline constexpr double trace = 1e-10;
}  // namespace tol

bool approx_equal(Complex a, Complex b, double abs_tol = tol::scalar_eq);
double max_abs_diff(const Matrix& a, const Matrix& b);

bool is_power_of_two(int n);
int qubit_count_for_dim(int dim);

/// Normalized state vector on one or more qubits. Constructors enforce unit
/// norm within tol::norm and a power-of-two dimension >= 2.
class Ket {
 public:
  explicit Ket(Vector amplitudes);
  static Ket normalized(Vector amplitudes);

  const Vector& amplitudes() const { return v_; }
  int dim() const { return static_cast<int>(v_.size()); }
  int qubit_count() const { return qubit_count_for_dim(dim()); }
  Complex amplitude(int i) const { return v_(i); }

 private:
  Vector v_;
};

/// |<a|b>| = 1 within tol, the global-phase-insensitive equality test.
bool same_state_up_to_phase(const Ket& a, const Ket& b, double tol = 1e-9);

/// Unit-trace, Hermitian, positive-semidefinite matrix. The constructor
/// validates all three invariants (Hermitian within tol::hermitian,
/// eigenvalues >= -tol::eigenvalue, trace 1 within tol::trace).
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix m);
  static DensityMatrix from_ket(const Ket& psi);
  static DensityMatrix maximally_mixed(int dim);
  /// Hermitizes and rescales the trace before constructing; for matrices
  /// produced by long floating-point pipelines.
  static DensityMatrix renormalized(Matrix m);

  const Matrix& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  int qubit_count() const { return qubit_count_for_dim(dim()); }

 private:
  Matrix m_;
};

// Kronecker products; left operand is qubit 1 (most significant index).
Matrix tensor(const Matrix& a, const Matrix& b);
Vector tensor(const Vector& a, const Vector& b);
Ket tensor(const Ket& a, const Ket& b);

/// Reduced state of a two-qubit density matrix; traced_qubit is 1 or 2.
DensityMatrix partial_trace(const DensityMatrix& rho, int traced_qubit);
Matrix partial_trace(const Matrix& m, int traced_qubit);

/// Hermitian PSD square root. Eigenvalues in [-tol::eigenvalue, 0) are
/// clamped to zero; values below that threshold signal a non-physical
/// matrix and throw.
Matrix psd_sqrt(const Matrix& m);

/// Entrywise complex conjugate (no transpose); conjugation is taken in the
/// computational (H/V) basis.
Matrix conjugate_entrywise(const Matrix& m);

/// Lift a single-qubit operator to qubit q (1-based) of an n-qubit register.
Matrix lift_to_qubit(const Matrix& u, int qubit, int n_qubits);

namespace gates {
const Matrix& identity();
const Matrix& x();
const Matrix& y();
const Matrix& z();
const Matrix& h();
const Matrix& cz();
/// exp(i Z beta / 2) = cos(beta/2) I + i sin(beta/2) Z.
Matrix z_rotation(double beta);
/// exp(i X beta / 2) = H z_rotation(beta) H.
Matrix x_rotation(double beta);
/// Lookup by name ("X", "Y", "Z", "H", "CZ", "I"); throws on unknown names.
Matrix by_name(const std::string& name);
}  // namespace gates

namespace states {
Ket zero();
Ket one();
Ket plus();
Ket minus();
Ket right_circular();  // (|0> + i|1>)/sqrt(2)
Ket left_circular();   // (|0> - i|1>)/sqrt(2)
/// (|0> +- e^{i alpha}|1>)/sqrt(2); the equatorial measurement family.
Ket alpha_plus(double alpha);
Ket alpha_minus(double alpha);
/// cos(phi/2)|0> - i e^{i gamma} sin(phi/2)|1>.
Ket chi(double phi, double gamma);
/// cos(phi/2)|H> + e^{i theta} sin(phi/2)|V>; phi and theta are the polar
/// and azimuthal Bloch angles of the state.
Ket psi(double phi, double theta);
Ket phi_plus();   // (|HH> + |VV>)/sqrt(2)
Ket phi_minus();  // (|HH> - |VV>)/sqrt(2)
/// CZ-bonded chain of |+> qubits; n in {2, 3}.
Ket linear_cluster(int n);
}  // namespace states

}  // namespace povmcluster
