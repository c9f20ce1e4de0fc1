#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "povmcluster/linalg.hpp"

// The tunable four-outcome polarization POVM, constructed four independent
// ways, validated, and applied to states.
//
// Outcome labels name the transmitted/reflected ports of the two polarizing
// beamsplitters. The index bijection is fixed once:
//
//   n = 1  TT  element Z rho* Z / 2   correction sigma = Z
//   n = 2  TR  element rho* / 2       correction sigma = I
//   n = 3  RT  element X rho* X / 2   correction sigma = X
//   n = 4  RR  element XZ rho* ZX / 2 correction sigma = XZ
//
// with rho = |psi(phi,theta)><psi(phi,theta)| and * the entrywise conjugate
// in the H/V basis. Every constructor stores elements in this canonical
// TT, TR, RT, RR order, so "same label" means "same element".

namespace povmcluster {

enum class OutcomeLabel { TT = 0, TR = 1, RT = 2, RR = 3 };

constexpr std::array<OutcomeLabel, 4> kOutcomeOrder = {
    OutcomeLabel::TT, OutcomeLabel::TR, OutcomeLabel::RT, OutcomeLabel::RR};

int outcome_index(OutcomeLabel label);              // 0..3
int outcome_number(OutcomeLabel label);             // n = 1..4
OutcomeLabel outcome_from_index(int index);         // 0..3
OutcomeLabel outcome_from_string(const std::string& s);
std::string to_string(OutcomeLabel label);

/// The correction operator sigma_n for each outcome: {Z, I, X, XZ}.
const Matrix& sigma_for(OutcomeLabel label);

struct Povm {
  std::array<Matrix, 4> elements;  // canonical TT, TR, RT, RR order

  const Matrix& element(OutcomeLabel label) const {
    return elements[static_cast<int>(label)];
  }
};

/// Measurement angles of the device: phi is the polar angle; the second
/// angle is gamma for the chi parametrization and theta for the psi one.
struct PovmParams {
  double phi = 0.0;
  double second_angle = 0.0;
};

/// Kraus operators K_n = psd_sqrt(E_n); satisfies sum K'K = I.
struct KrausSet {
  std::array<Matrix, 4> operators;
};

KrausSet kraus_set(const Povm& p);

/// Ancilla-dilation construction: E_ab = <+_A| CZ Pi_ab CZ |+_A> with
/// Pi_ab = Z^a|phi+><phi+|Z^a  (x)  X^a Z^b|gamma+><gamma+|Z^b X^a,
/// the ancilla measured at angle phi and the system at gamma.
/// Outcome mapping: (a,b) = (0,0)->TR, (0,1)->TT, (1,0)->RT, (1,1)->RR.
Povm povm_from_ancilla(double phi, double gamma);

/// Closed form {E_m} = (1/2) sigma_m |chi(phi,gamma)><chi| sigma_m' with
/// sigma_m in {I, X, XZ, Z} for m = 1..4; stored at labels TR, RT, RR, TT.
Povm povm_chi(double phi, double gamma);

/// The device POVM {E_n(phi,theta)} = (1/2){Z rho* Z, rho*, X rho* X,
/// XZ rho* ZX} with rho = |psi(phi,theta)><psi(phi,theta)|.
Povm povm_experimental(double phi, double theta);

/// The angle gamma such that povm_chi(phi, gamma) equals
/// povm_experimental(phi, theta) label for label: gamma = pi/2 - theta.
double parameter_map(double theta);

/// Jones-matrix model of the beam-displacer interferometer. Traces the
/// input polarization through displacement into a path qubit, the HWP(phi/4)
/// + PBS polarization measurement, the per-arm 45/0 degree HWP flips,
/// recombination, and the QWP(45) + HWP(-theta/4 | +theta/4) + PBS analyzer
/// in the transmitted | reflected arm. Each detector port yields one rank-1
/// effect on the input space.
///
/// Wave-plate conventions: HWP at angle t is [[cos 2t, sin 2t],
/// [sin 2t, -cos 2t]]; QWP at 45 degrees is e^{i pi/4} [[1, -i], [-i, 1]]
/// / sqrt(2). The tiltable balancing plate in each arm contributes a fixed
/// quarter-wave path phase (factor i); these choices reproduce the
/// experimental elements exactly and are pinned by the differential test
/// against povm_experimental.
Povm optical_model_povm(double phi, double theta);

struct PovmDiagnostics {
  bool structure_ok = false;       // four 2x2 elements
  double max_hermiticity_dev = 0;  // max over elements
  double min_eigenvalue = 0;       // min over elements
  double completeness_dev = 0;     // max-abs deviation of sum from identity
  bool pass = false;               // all within 1e-10
};

PovmDiagnostics validate(const Povm& p);

struct MeasurementBranch {
  OutcomeLabel label;
  double probability = 0.0;
  /// Post-measurement state K_n rho K_n' / p_n; absent for branches with
  /// probability below 1e-14.
  std::optional<DensityMatrix> post_state;
};

/// Apply the POVM to one qubit of a one- or two-qubit state. Probabilities
/// are Tr[(E_n lifted) rho]; post states use the Kraus rule with
/// K_n = psd_sqrt(E_n) lifted to target_qubit.
std::vector<MeasurementBranch> measure(const DensityMatrix& state, const Povm& p,
                                       int target_qubit = 1);

}  // namespace povmcluster
