#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "povmcluster/linalg.hpp"

using namespace povmcluster;

namespace {

constexpr double kPi = std::numbers::pi;

Matrix random_matrix(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal;
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(normal(rng), normal(rng));
  }
  return m;
}

Matrix random_psd(std::mt19937_64& rng, int dim) {
  const Matrix a = random_matrix(rng, dim);
  return a * a.adjoint();
}

DensityMatrix random_density(std::mt19937_64& rng, int dim) {
  Matrix m = random_psd(rng, dim);
  return DensityMatrix(m / m.trace().real());
}

Matrix proj(const Ket& k) { return k.amplitudes() * k.amplitudes().adjoint(); }

}  // namespace

TEST_CASE("gate catalog matrices are unitary") {
  std::vector<Matrix> catalog = {gates::x(), gates::y(), gates::z(), gates::h(),
                                 gates::cz()};
  for (double beta : {0.0, 0.3, -1.7, kPi, 2.0 * kPi}) {
    catalog.push_back(gates::z_rotation(beta));
    catalog.push_back(gates::x_rotation(beta));
  }
  for (const auto& u : catalog) {
    const Matrix id = Matrix::Identity(u.rows(), u.cols());
    CHECK(max_abs_diff(u.adjoint() * u, id) < 1e-12);
  }
}

TEST_CASE("gate lookup by name") {
  CHECK(max_abs_diff(gates::by_name("H"), gates::h()) == 0.0);
  CHECK(max_abs_diff(gates::by_name("CZ"), gates::cz()) == 0.0);
  CHECK_THROWS_AS(gates::by_name("T"), std::invalid_argument);
}

TEST_CASE("z_rotation matches cos + i sin Z and maps |+> as expected") {
  for (double beta : {0.1, 1.0, -2.2}) {
    const Matrix expected = std::cos(beta / 2) * gates::identity() +
                            Complex(0, 1) * std::sin(beta / 2) * gates::z();
    CHECK(max_abs_diff(gates::z_rotation(beta), expected) < 1e-14);
  }
  const Vector rotated = gates::z_rotation(kPi) * states::plus().amplitudes();
  CHECK(same_state_up_to_phase(Ket::normalized(rotated), states::minus()));
}

TEST_CASE("hadamard takes |0> to |+>, CZ flips |11>") {
  CHECK(same_state_up_to_phase(
      Ket::normalized(gates::h() * states::zero().amplitudes()), states::plus()));
  Vector v11 = Vector::Zero(4);
  v11(3) = 1;
  CHECK(max_abs_diff(Matrix(gates::cz() * v11), Matrix(-v11)) < 1e-15);
}

TEST_CASE("tensor basis bookkeeping, qubit 1 most significant") {
  const Ket k01 = tensor(states::zero(), states::one());
  CHECK(std::abs(k01.amplitude(1) - Complex(1, 0)) < 1e-15);

  // X on qubit 1 maps |00> to |10>.
  Vector v00 = Vector::Zero(4);
  v00(0) = 1;
  const Vector flipped = tensor(gates::x(), gates::identity()) * v00;
  CHECK(std::abs(flipped(2) - Complex(1, 0)) < 1e-15);

  // Z (x) Z leaves |Phi+> unchanged.
  const Vector bell = states::phi_plus().amplitudes();
  CHECK((tensor(gates::z(), gates::z()) * bell - bell).norm() < 1e-14);
}

TEST_CASE("tensor is associative and bilinear on random inputs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = random_matrix(rng, 2);
    const Matrix b = random_matrix(rng, 2);
    const Matrix c = random_matrix(rng, 2);
    CHECK(max_abs_diff(tensor(tensor(a, b), c), tensor(a, tensor(b, c))) < 1e-12);
    const Complex s(0.7, -0.2);
    CHECK(max_abs_diff(tensor((s * a).eval(), b), (s * tensor(a, b)).eval()) <
          1e-12);
    CHECK(max_abs_diff(tensor((a + c).eval(), b),
                       (tensor(a, b) + tensor(c, b)).eval()) < 1e-12);
  }
}

TEST_CASE("partial trace recovers known reductions") {
  const DensityMatrix bell = DensityMatrix::from_ket(states::phi_plus());
  CHECK(max_abs_diff(partial_trace(bell, 1).matrix(),
                     Matrix::Identity(2, 2) / 2.0) < 1e-12);

  const DensityMatrix product = DensityMatrix(
      tensor(proj(states::zero()), proj(states::plus())));
  CHECK(max_abs_diff(partial_trace(product, 2).matrix(), proj(states::zero())) <
        1e-12);

  CHECK(max_abs_diff(partial_trace(DensityMatrix::maximally_mixed(4), 1).matrix(),
                     Matrix::Identity(2, 2) / 2.0) < 1e-14);

  CHECK_THROWS_AS(partial_trace(Matrix::Identity(2, 2), 1),
                  std::invalid_argument);
}

TEST_CASE("partial trace of a product state is the kept factor") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const DensityMatrix a = random_density(rng, 2);
    const DensityMatrix b = random_density(rng, 2);
    const Matrix joint = tensor(a.matrix(), b.matrix());
    CHECK(max_abs_diff(partial_trace(joint, 2), a.matrix()) < 1e-12);
    CHECK(max_abs_diff(partial_trace(joint, 1), b.matrix()) < 1e-12);
    // Trace is preserved either way.
    CHECK(std::abs(partial_trace(joint, 1).trace().real() - 1.0) < 1e-12);
  }
}

TEST_CASE("psd_sqrt on diagonal, identity, and projector inputs") {
  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 4;
  diag(1, 1) = 9;
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 2;
  expected(1, 1) = 3;
  CHECK(max_abs_diff(psd_sqrt(diag), expected) < 1e-12);
  CHECK(max_abs_diff(psd_sqrt(Matrix::Identity(4, 4)), Matrix::Identity(4, 4)) <
        1e-12);
  const Matrix p = proj(states::plus());
  CHECK(max_abs_diff(psd_sqrt(p), p) < 1e-12);
}

TEST_CASE("psd_sqrt squares back to the input on random PSD matrices") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = trial % 2 == 0 ? 2 : 4;
    const Matrix m = random_psd(rng, dim);
    const Matrix s = psd_sqrt(m);
    CHECK((s * s - m).norm() < 1e-9 * std::max(1.0, m.norm()));
    CHECK((s - s.adjoint()).norm() < 1e-10);
  }
}

TEST_CASE("psd_sqrt rejects non-hermitian and indefinite inputs") {
  Matrix nh = Matrix::Zero(2, 2);
  nh(0, 1) = 1;
  CHECK_THROWS_AS(psd_sqrt(nh), std::invalid_argument);
  Matrix neg = Matrix::Identity(2, 2);
  neg(1, 1) = -0.1;
  CHECK_THROWS_AS(psd_sqrt(neg), std::invalid_argument);
}

TEST_CASE("entrywise conjugation flips the azimuthal angle") {
  const Matrix r = proj(states::psi(kPi / 2, kPi / 2));
  const Matrix expected = proj(states::psi(kPi / 2, -kPi / 2));
  CHECK(max_abs_diff(conjugate_entrywise(r), expected) < 1e-14);

  Matrix real_m(2, 2);
  real_m << 1.0, 0.25, 0.25, 0.5;
  CHECK(max_abs_diff(conjugate_entrywise(real_m), real_m) == 0.0);

  std::mt19937_64 rng(3);
  const Matrix m = random_matrix(rng, 4);
  CHECK(max_abs_diff(conjugate_entrywise(conjugate_entrywise(m)), m) == 0.0);
}

TEST_CASE("state catalog basics") {
  CHECK(same_state_up_to_phase(states::psi(0.0, 1.234), states::zero()));
  CHECK(same_state_up_to_phase(states::psi(kPi / 2, kPi / 2),
                               states::right_circular()));
  // psi(pi/2, pi/2) is the +1 eigenstate of Y.
  const Vector y_applied = gates::y() * states::psi(kPi / 2, kPi / 2).amplitudes();
  CHECK((y_applied - states::psi(kPi / 2, kPi / 2).amplitudes()).norm() < 1e-14);

  CHECK(same_state_up_to_phase(states::alpha_plus(0.0), states::plus()));
  CHECK(same_state_up_to_phase(states::alpha_minus(0.0), states::minus()));
  CHECK_THROWS_AS(states::linear_cluster(4), std::invalid_argument);
}

TEST_CASE("two-qubit cluster matches the symbolic expansion of CZ|++>") {
  // CZ (|00> + |01> + |10> + |11>)/2 flips only the |11> sign.
  Vector expected(4);
  expected << 0.5, 0.5, 0.5, -0.5;
  CHECK((states::linear_cluster(2).amplitudes() - expected).norm() < 1e-14);

  // Equivalent to (H (x) I)|Phi+> up to global phase.
  const Vector h_bell =
      tensor(gates::h(), gates::identity()) * states::phi_plus().amplitudes();
  CHECK(same_state_up_to_phase(states::linear_cluster(2), Ket::normalized(h_bell)));
}

TEST_CASE("psi is normalized on an angle grid") {
  for (int i = 0; i <= 12; ++i) {
    for (int j = 0; j <= 12; ++j) {
      const double phi = kPi * i / 12;
      const double theta = -kPi + 2 * kPi * j / 12;
      CHECK(std::abs(states::psi(phi, theta).amplitudes().norm() - 1.0) < 1e-14);
      CHECK(std::abs(states::chi(phi, theta).amplitudes().norm() - 1.0) < 1e-14);
    }
  }
}

TEST_CASE("ket and density constructors enforce invariants") {
  Vector unnormalized(2);
  unnormalized << 1.0, 1.0;
  CHECK_THROWS_AS((void)Ket(unnormalized), std::invalid_argument);
  CHECK(Ket::normalized(unnormalized).dim() == 2);
  Vector dim3(3);
  dim3 << 1, 0, 0;
  CHECK_THROWS_AS((void)Ket(dim3), std::invalid_argument);

  Matrix not_unit_trace = Matrix::Identity(2, 2);
  CHECK_THROWS_AS((void)DensityMatrix(not_unit_trace), std::invalid_argument);
  Matrix negative = Matrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS((void)DensityMatrix(negative), std::invalid_argument);
}

TEST_CASE("lift_to_qubit places operators at the right slot") {
  const Matrix x1 = lift_to_qubit(gates::x(), 1, 2);
  CHECK(max_abs_diff(x1, tensor(gates::x(), gates::identity())) == 0.0);
  const Matrix x2 = lift_to_qubit(gates::x(), 2, 3);
  CHECK(max_abs_diff(
            x2, tensor(tensor(gates::identity(), gates::x()), gates::identity())) ==
        0.0);
}
