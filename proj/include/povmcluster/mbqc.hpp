#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "povmcluster/linalg.hpp"
#include "povmcluster/povm.hpp"

// Measurement-based computation on small clusters: brute-force projective
// MBQC with adaptive bases and byproduct corrections, the POVM-virtualized
// two-photon computation with feedforward, and the expected-output formula
// for imperfect resource states.

namespace povmcluster {

struct ClusterSpec {
  int n_qubits = 2;                          // 2 or 3
  std::vector<std::pair<int, int>> edges;    // 1-based qubit pairs
  std::vector<int> input_qubits;             // measured, in measurement order
  int output_qubit = 0;                      // exactly one output
};

ClusterSpec chain_cluster_spec(int n_qubits);

/// CZ applied over every edge of |+>^(x)n.
Ket build_cluster(const ClusterSpec& spec);

/// One angle per measured qubit; measurements are in the equatorial
/// |alpha+->  = (|0> +- e^{i alpha}|1>)/sqrt(2) family.
struct MeasurementPlan {
  std::vector<double> angles;
};

/// Byproduct record: the accumulated X^x Z^z on the logical output.
struct PauliFrame {
  int x_power = 0;  // mod 2
  int z_power = 0;  // mod 2
};

struct BranchResult {
  std::vector<int> outcomes;  // 0 = +, 1 = - per measured qubit
  double probability = 0.0;
  std::optional<DensityMatrix> corrected_output;  // absent for prob ~ 0
};

/// Enumerates all 2^(n-1) outcome branches of a linear-chain cluster
/// measured left to right. The basis of qubit j adapts to earlier outcomes
/// ((-1)^x alpha_j with x the current X frame); the final byproduct
/// correction X^x Z^z is undone on the output qubit. For an n-qubit chain
/// all corrected branches agree.
std::vector<BranchResult> run_projective_mbqc(const Ket& cluster,
                                              const MeasurementPlan& plan);

/// Chain measurement angles (phi', gamma') whose corrected three-qubit
/// output equals |psi(phi,theta)>:
///   phi'   = arccos(sin phi cos theta)
///   gamma' = atan2(cos phi, -sin phi sin theta)
/// (gamma' = 0 at the degenerate poles sin phi' = 0).
struct ProjectiveAngles {
  double phi_prime = 0.0;
  double gamma_prime = 0.0;
};

ProjectiveAngles projective_angles(double phi, double theta);

/// The equivalent preparation circuit: successive rotations of |+> about
/// the z and then x axes, exp(i X gamma'/2) exp(i Z phi'/2) |+>, with the
/// chain angles above. Equals |psi(phi,theta)> up to global phase.
Ket circuit_oracle(double phi, double theta);

/// Pockels-cell triggers per outcome. PC1 enacts X and fires on RT or RR;
/// PC2 is rotated to act as Z and fires on TT or RR. The composition
/// X^pc1 Z^pc2 equals sigma_n for every outcome.
struct FeedforwardEntry {
  bool pc1_fires = false;
  bool pc2_fires = false;
  Matrix correction;  // X^pc1 * Z^pc2
};

const std::array<FeedforwardEntry, 4>& feedforward_table();

struct PovmBranchResult {
  OutcomeLabel label;
  double probability = 0.0;
  std::optional<DensityMatrix> output;  // corrected single-qubit state
};

/// Apply povm_experimental(phi,theta) to qubit 1 of the two-qubit resource,
/// trace it out, and apply the feedforward correction sigma_n to qubit 2.
/// On |Phi+> every branch yields |psi(phi,theta)> with probability 1/4.
std::vector<PovmBranchResult> run_povm_mbqc(const DensityMatrix& resource,
                                            double phi, double theta);

/// rho_e(phi,theta) = sum_n sigma_n Tr_1[(E_n (x) I) rho (E_n (x) I)'] sigma_n',
/// renormalized to unit trace (the raw sum carries trace 1/2 because the
/// elements are trace-1/2 projectors). Equals the probability-weighted
/// mixture of the run_povm_mbqc branch outputs.
DensityMatrix expected_output(const DensityMatrix& resource, double phi,
                              double theta);
Matrix expected_output_unnormalized(const Matrix& resource, double phi,
                                    double theta);

/// Convert between the two resource representations, which differ by a
/// Hadamard on qubit 1: (H (x) I)|Phi+> is the two-qubit cluster.
DensityMatrix hadamard_frame_adapter(const DensityMatrix& rho);

}  // namespace povmcluster
