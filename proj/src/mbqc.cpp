#include "povmcluster/mbqc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace povmcluster {

namespace {

constexpr double kZeroProbability = 1e-14;

/// Contract qubit q (1-based, MSB first) of an n-qubit ket with <bra|,
/// returning the unnormalized (n-1)-qubit vector.
Vector project_qubit(const Vector& state, int qubit, int n_qubits,
                     const Vector& bra_of) {
  const int out_dim = 1 << (n_qubits - 1);
  const int weight = 1 << (n_qubits - qubit);  // bit weight of qubit q
  const int low_mask = weight - 1;
  Vector out(out_dim);
  for (int j = 0; j < out_dim; ++j) {
    const int high = (j & ~low_mask) << 1;
    const int low = j & low_mask;
    Complex acc = 0.0;
    for (int b = 0; b < 2; ++b) {
      acc += std::conj(bra_of(b)) * state(high | (b * weight) | low);
    }
    out(j) = acc;
  }
  return out;
}

}  // namespace

ClusterSpec chain_cluster_spec(int n_qubits) {
  ClusterSpec spec;
  spec.n_qubits = n_qubits;
  for (int q = 1; q < n_qubits; ++q) spec.edges.emplace_back(q, q + 1);
  for (int q = 1; q < n_qubits; ++q) spec.input_qubits.push_back(q);
  spec.output_qubit = n_qubits;
  return spec;
}

Ket build_cluster(const ClusterSpec& spec) {
  if (spec.n_qubits != 2 && spec.n_qubits != 3) {
    throw std::invalid_argument("build_cluster: n_qubits must be 2 or 3");
  }
  const int dim = 1 << spec.n_qubits;
  Vector v = Vector::Constant(dim, 1.0);
  for (const auto& [a, b] : spec.edges) {
    if (a < 1 || a > spec.n_qubits || b < 1 || b > spec.n_qubits || a == b) {
      throw std::invalid_argument("build_cluster: invalid edge");
    }
    const int wa = 1 << (spec.n_qubits - a);
    const int wb = 1 << (spec.n_qubits - b);
    for (int i = 0; i < dim; ++i) {
      if ((i & wa) && (i & wb)) v(i) = -v(i);
    }
  }
  return Ket::normalized(std::move(v));
}

std::vector<BranchResult> run_projective_mbqc(const Ket& cluster,
                                              const MeasurementPlan& plan) {
  const int n = cluster.qubit_count();
  const int measured = n - 1;
  if (static_cast<int>(plan.angles.size()) != measured) {
    throw std::invalid_argument("run_projective_mbqc: plan must cover every "
                                "non-output qubit");
  }
  std::vector<BranchResult> branches;
  branches.reserve(1 << measured);
  for (int pattern = 0; pattern < (1 << measured); ++pattern) {
    Vector state = cluster.amplitudes();
    PauliFrame frame;
    double probability = 1.0;
    std::vector<int> outcomes(measured);
    bool dead = false;
    for (int j = 0; j < measured; ++j) {
      const int s = (pattern >> j) & 1;
      outcomes[j] = s;
      const double angle = (frame.x_power ? -1.0 : 1.0) * plan.angles[j];
      const Ket basis = s == 0 ? states::alpha_plus(angle)
                               : states::alpha_minus(angle);
      // Qubits are measured left to right; after each projection the state
      // reindexes, so the next physical qubit is always qubit 1.
      Vector reduced =
          project_qubit(state, 1, n - j, basis.amplitudes());
      const double p = reduced.squaredNorm();
      probability *= p;
      if (probability <= kZeroProbability) {
        dead = true;
        break;
      }
      state = reduced / std::sqrt(p);
      const int new_x = (s + frame.z_power) % 2;
      frame.z_power = frame.x_power;
      frame.x_power = new_x;
    }
    BranchResult branch;
    branch.outcomes = std::move(outcomes);
    if (dead) {
      branch.probability = 0.0;
      branches.push_back(std::move(branch));
      continue;
    }
    branch.probability = probability;
    Matrix correction = Matrix::Identity(2, 2);
    if (frame.x_power) correction = gates::x() * correction;
    if (frame.z_power) correction = correction * gates::z();
    // state is the single output qubit; undo the byproduct X^x Z^z.
    const Vector corrected = correction.adjoint() * state;
    branch.corrected_output =
        DensityMatrix::renormalized(corrected * corrected.adjoint());
    branches.push_back(std::move(branch));
  }
  return branches;
}

ProjectiveAngles projective_angles(double phi, double theta) {
  double c = std::sin(phi) * std::cos(theta);
  c = std::clamp(c, -1.0, 1.0);
  ProjectiveAngles out;
  out.phi_prime = std::acos(c);
  const double sp = std::sin(out.phi_prime);
  if (sp < 1e-12) {
    out.gamma_prime = 0.0;
  } else {
    out.gamma_prime = std::atan2(std::cos(phi), -std::sin(phi) * std::sin(theta));
  }
  return out;
}

Ket circuit_oracle(double phi, double theta) {
  const ProjectiveAngles a = projective_angles(phi, theta);
  const Vector v = gates::x_rotation(a.gamma_prime) *
                   gates::z_rotation(a.phi_prime) * states::plus().amplitudes();
  return Ket::normalized(v);
}

const std::array<FeedforwardEntry, 4>& feedforward_table() {
  static const std::array<FeedforwardEntry, 4> table = [] {
    std::array<FeedforwardEntry, 4> t;
    for (OutcomeLabel label : kOutcomeOrder) {
      FeedforwardEntry e;
      e.pc1_fires = label == OutcomeLabel::RT || label == OutcomeLabel::RR;
      e.pc2_fires = label == OutcomeLabel::TT || label == OutcomeLabel::RR;
      Matrix m = Matrix::Identity(2, 2);
      if (e.pc1_fires) m = gates::x() * m;
      if (e.pc2_fires) m = m * gates::z();
      e.correction = m;
      t[outcome_index(label)] = std::move(e);
    }
    return t;
  }();
  return table;
}

std::vector<PovmBranchResult> run_povm_mbqc(const DensityMatrix& resource,
                                            double phi, double theta) {
  if (resource.qubit_count() != 2) {
    throw std::invalid_argument("run_povm_mbqc: resource must be a two-qubit state");
  }
  const Povm povm = povm_experimental(phi, theta);
  const auto branches = measure(resource, povm, 1);
  std::vector<PovmBranchResult> out;
  out.reserve(4);
  for (const auto& b : branches) {
    PovmBranchResult r{b.label, b.probability, std::nullopt};
    if (b.post_state.has_value()) {
      const Matrix reduced = partial_trace(b.post_state->matrix(), 1);
      const Matrix& sigma = sigma_for(b.label);
      r.output = DensityMatrix::renormalized(sigma * reduced * sigma.adjoint());
    }
    out.push_back(std::move(r));
  }
  return out;
}

Matrix expected_output_unnormalized(const Matrix& resource, double phi,
                                    double theta) {
  const Povm povm = povm_experimental(phi, theta);
  const Matrix i2 = Matrix::Identity(2, 2);
  Matrix sum = Matrix::Zero(2, 2);
  for (OutcomeLabel label : kOutcomeOrder) {
    const Matrix lifted = tensor(povm.element(label), i2);
    const Matrix sandwich = lifted * resource * lifted.adjoint();
    const Matrix& sigma = sigma_for(label);
    sum += sigma * partial_trace(sandwich, 1) * sigma.adjoint();
  }
  return sum;
}

DensityMatrix expected_output(const DensityMatrix& resource, double phi,
                              double theta) {
  if (resource.qubit_count() != 2) {
    throw std::invalid_argument("expected_output: resource must be a two-qubit state");
  }
  return DensityMatrix::renormalized(
      expected_output_unnormalized(resource.matrix(), phi, theta));
}

DensityMatrix hadamard_frame_adapter(const DensityMatrix& rho) {
  if (rho.qubit_count() != 2) {
    throw std::invalid_argument("hadamard_frame_adapter: expected two qubits");
  }
  const Matrix h1 = tensor(gates::h(), Matrix::Identity(2, 2));
  return DensityMatrix::renormalized(h1 * rho.matrix() * h1.adjoint());
}

}  // namespace povmcluster
