#include "povmcluster/povm.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace povmcluster {

namespace {

constexpr double kZeroProbability = 1e-14;

Matrix projector(const Ket& k) {
  return k.amplitudes() * k.amplitudes().adjoint();
}

}  // namespace

int outcome_index(OutcomeLabel label) { return static_cast<int>(label); }

int outcome_number(OutcomeLabel label) { return static_cast<int>(label) + 1; }

OutcomeLabel outcome_from_index(int index) {
  if (index < 0 || index > 3) throw std::invalid_argument("outcome index out of range");
  return static_cast<OutcomeLabel>(index);
}

OutcomeLabel outcome_from_string(const std::string& s) {
  if (s == "TT") return OutcomeLabel::TT;
  if (s == "TR") return OutcomeLabel::TR;
  if (s == "RT") return OutcomeLabel::RT;
  if (s == "RR") return OutcomeLabel::RR;
  throw std::invalid_argument("unknown outcome label: " + s);
}

std::string to_string(OutcomeLabel label) {
  switch (label) {
    case OutcomeLabel::TT: return "TT";
    case OutcomeLabel::TR: return "TR";
    case OutcomeLabel::RT: return "RT";
    case OutcomeLabel::RR: return "RR";
  }
  throw std::invalid_argument("invalid outcome label");
}

const Matrix& sigma_for(OutcomeLabel label) {
  static const std::array<Matrix, 4> sigmas = {
      gates::z(), gates::identity(), gates::x(), (gates::x() * gates::z()).eval()};
  return sigmas[static_cast<int>(label)];
}

KrausSet kraus_set(const Povm& p) {
  KrausSet k;
  for (int i = 0; i < 4; ++i) k.operators[i] = psd_sqrt(p.elements[i]);
  return k;
}

Povm povm_from_ancilla(double phi, double gamma) {
  // Joint space ordering: ancilla A is qubit 1, system S is qubit 2.
  const Vector plus = states::plus().amplitudes();
  const Matrix inject = tensor(Matrix(plus), Matrix::Identity(2, 2));  // 4x2
  const Matrix& cz = gates::cz();

  const Ket phi_basis = states::alpha_plus(phi);
  const Ket gamma_basis = states::alpha_plus(gamma);

  Povm out;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      Matrix pa = projector(phi_basis);
      if (a) pa = gates::z() * pa * gates::z();
      Matrix qb = projector(gamma_basis);
      if (b) qb = gates::z() * qb * gates::z();
      if (a) qb = gates::x() * qb * gates::x();
      const Matrix joint = tensor(pa, qb);
      const Matrix element = inject.adjoint() * cz * joint * cz * inject;
      // (a,b) -> sigma in Eq-order: (0,0)=I->TR, (0,1)=Z->TT,
      // (1,0)=X->RT, (1,1)=XZ->RR.
      OutcomeLabel label;
      if (a == 0 && b == 0) label = OutcomeLabel::TR;
      else if (a == 0 && b == 1) label = OutcomeLabel::TT;
      else if (a == 1 && b == 0) label = OutcomeLabel::RT;
      else label = OutcomeLabel::RR;
      out.elements[outcome_index(label)] = element;
    }
  }
  return out;
}

Povm povm_chi(double phi, double gamma) {
  const Matrix base = projector(states::chi(phi, gamma)) / 2.0;
  const Matrix& x = gates::x();
  const Matrix& z = gates::z();
  Povm out;
  out.elements[outcome_index(OutcomeLabel::TR)] = base;
  out.elements[outcome_index(OutcomeLabel::RT)] = x * base * x;
  out.elements[outcome_index(OutcomeLabel::RR)] = x * z * base * z * x;
  out.elements[outcome_index(OutcomeLabel::TT)] = z * base * z;
  return out;
}

Povm povm_experimental(double phi, double theta) {
  const Matrix rho_conj =
      conjugate_entrywise(projector(states::psi(phi, theta)));
  const Matrix& x = gates::x();
  const Matrix& z = gates::z();
  Povm out;
  out.elements[outcome_index(OutcomeLabel::TT)] = z * rho_conj * z / 2.0;
  out.elements[outcome_index(OutcomeLabel::TR)] = rho_conj / 2.0;
  out.elements[outcome_index(OutcomeLabel::RT)] = x * rho_conj * x / 2.0;
  out.elements[outcome_index(OutcomeLabel::RR)] =
      x * z * rho_conj * z * x / 2.0;
  return out;
}

double parameter_map(double theta) { return std::numbers::pi / 2.0 - theta; }

namespace {

Matrix hwp(double t) {
  Matrix m(2, 2);
  m << std::cos(2 * t), std::sin(2 * t), std::sin(2 * t), -std::cos(2 * t);
  return m;
}

Matrix qwp45() {
  Matrix m(2, 2);
  const Complex mi(0, -1);
  m << 1, mi, mi, 1;
  return std::exp(Complex(0, std::numbers::pi / 4)) / std::sqrt(2.0) * m;
}

}  // namespace

Povm optical_model_povm(double phi, double theta) {
  const double pi = std::numbers::pi;
  // Combined space: polarization (x) path, index = 2*pol + path with
  // pol in {H=0, V=1} and path in {U=0, L=1}.
  const Matrix i2 = Matrix::Identity(2, 2);
  Matrix proj_u = Matrix::Zero(2, 2);
  proj_u(0, 0) = 1;
  Matrix proj_l = Matrix::Zero(2, 2);
  proj_l(1, 1) = 1;
  Matrix proj_h = Matrix::Zero(2, 2);
  proj_h(0, 0) = 1;
  Matrix proj_v = Matrix::Zero(2, 2);
  proj_v(1, 1) = 1;

  // (i) First beam displacer: a|H> + b|V> -> a|H,U> + b|V,L>.
  Matrix bd1 = Matrix::Zero(4, 2);
  bd1(0, 0) = 1;  // |H> -> |H,U>
  bd1(3, 1) = 1;  // |V> -> |V,L>

  // (ii) Polarization measurement: HWP(phi/4) on both paths, then a PBS
  // splitting into the transmitted (H) and reflected (V) arms.
  const Matrix pol_meas = tensor(hwp(phi / 4.0), i2);
  const Matrix arm_t_sel = tensor(proj_h, i2);
  const Matrix arm_r_sel = tensor(proj_v, i2);

  // (iii) In-arm flips: HWP at 45 degrees in path U (L) of the transmitted
  // (reflected) arm; the balancing 0-degree HWP in the other path carries
  // the quarter-wave tilt phase.
  const Complex tilt(0, 1);
  const Matrix stage_t =
      tensor(hwp(pi / 4.0), proj_u) + tilt * tensor(hwp(0.0), proj_l);
  const Matrix stage_r =
      tilt * tensor(hwp(0.0), proj_u) + tensor(hwp(pi / 4.0), proj_l);

  // (iv) Recombining beam displacer: |H,L> -> |H>, |V,U> -> |V>.
  Matrix recombine = Matrix::Zero(2, 4);
  recombine(0, 1) = 1;
  recombine(1, 2) = 1;

  // (v) Analyzer: QWP(45), HWP(-theta/4) in the transmitted arm and
  // HWP(+theta/4) in the reflected arm, then a PBS.
  const Matrix arm_t = hwp(-theta / 4.0) * qwp45() * recombine * stage_t *
                       arm_t_sel * pol_meas * bd1;
  const Matrix arm_r = hwp(theta / 4.0) * qwp45() * recombine * stage_r *
                       arm_r_sel * pol_meas * bd1;

  // Detector ports: row 0 = transmitted (H), row 1 = reflected (V) at the
  // final PBS of each arm.
  Povm out;
  out.elements[outcome_index(OutcomeLabel::TT)] =
      arm_t.row(0).adjoint() * arm_t.row(0);
  out.elements[outcome_index(OutcomeLabel::TR)] =
      arm_t.row(1).adjoint() * arm_t.row(1);
  out.elements[outcome_index(OutcomeLabel::RT)] =
      arm_r.row(0).adjoint() * arm_r.row(0);
  out.elements[outcome_index(OutcomeLabel::RR)] =
      arm_r.row(1).adjoint() * arm_r.row(1);
  return out;
}

PovmDiagnostics validate(const Povm& p) {
  PovmDiagnostics d;
  d.structure_ok = true;
  for (const auto& e : p.elements) {
    if (e.rows() != 2 || e.cols() != 2 || !e.allFinite()) {
      d.structure_ok = false;
    }
  }
  if (!d.structure_ok) {
    throw std::invalid_argument("validate: POVM elements must be finite 2x2 matrices");
  }
  Matrix sum = Matrix::Zero(2, 2);
  double min_eig = std::numeric_limits<double>::infinity();
  double herm = 0.0;
  for (const auto& e : p.elements) {
    herm = std::max(herm, (e - e.adjoint()).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Matrix> es((e + e.adjoint()) / 2.0);
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    sum += e;
  }
  d.max_hermiticity_dev = herm;
  d.min_eigenvalue = min_eig;
  d.completeness_dev = (sum - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff();
  d.pass = d.max_hermiticity_dev <= 1e-10 && d.min_eigenvalue >= -1e-10 &&
           d.completeness_dev <= 1e-10;
  return d;
}

std::vector<MeasurementBranch> measure(const DensityMatrix& state, const Povm& p,
                                       int target_qubit) {
  const int n = state.qubit_count();
  if (n != 1 && n != 2) {
    throw std::invalid_argument("measure: state must have 1 or 2 qubits");
  }
  if (target_qubit < 1 || target_qubit > n) {
    throw std::invalid_argument("measure: target qubit out of range");
  }
  const KrausSet kraus = kraus_set(p);
  std::vector<MeasurementBranch> branches;
  branches.reserve(4);
  double total = 0.0;
  for (OutcomeLabel label : kOutcomeOrder) {
    const Matrix effect = lift_to_qubit(p.element(label), target_qubit, n);
    const double prob =
        std::max(0.0, (effect * state.matrix()).trace().real());
    MeasurementBranch branch{label, prob, std::nullopt};
    if (prob > kZeroProbability) {
      const Matrix k =
          lift_to_qubit(kraus.operators[outcome_index(label)], target_qubit, n);
      branch.post_state =
          DensityMatrix::renormalized(k * state.matrix() * k.adjoint());
    } else {
      branch.probability = 0.0;
    }
    total += branch.probability;
    branches.push_back(std::move(branch));
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::runtime_error("measure: branch probabilities sum to " +
                             std::to_string(total));
  }
  return branches;
}

}  // namespace povmcluster
