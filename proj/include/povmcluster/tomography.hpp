#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "povmcluster/linalg.hpp"
#include "povmcluster/povm.hpp"

// Photon-counting simulation, maximum-likelihood state reconstruction, and
// the scoring metrics (fidelity, purity, tangle).

namespace povmcluster {

/// Rank-1 analyzer projector with a printable label.
struct AnalyzerSetting {
  Matrix projector;
  std::string label;
};

/// The six eigenstates of X, Y and Z: H, V, D, A, R, L.
std::vector<AnalyzerSetting> pauli_analyzers_1q();
/// The 36 products of the single-qubit set, for two-qubit tomography.
std::vector<AnalyzerSetting> pauli_analyzers_2q();

struct CountRecord {
  AnalyzerSetting setting;
  std::optional<OutcomeLabel> outcome;  // per-POVM-output coincidences
  double count = 0.0;  // integer for sampled data; real in exact-means mode
  double duration_s = 8.0;
};

/// One independent Poisson draw per setting with mean
/// mean_total_per_setting * Tr(projector rho). Each record derives its own
/// generator from (seed, record index), so results do not depend on
/// evaluation order.
std::vector<CountRecord> simulate_counts(const DensityMatrix& rho,
                                         const std::vector<AnalyzerSetting>& settings,
                                         double mean_total_per_setting,
                                         std::uint64_t seed,
                                         double duration_s = 8.0);

/// Noiseless counts equal to their Poisson means (real-valued).
std::vector<CountRecord> exact_counts(const DensityMatrix& rho,
                                      const std::vector<AnalyzerSetting>& settings,
                                      double mean_total_per_setting,
                                      double duration_s = 8.0);

/// Least-squares solve of Tr(Pi_i rho) = n_i / N over the Hermitian
/// parametrization, trace-normalized. The flux N is estimated from the
/// total counts (exact whenever the projectors sum to a multiple of the
/// identity, as the Pauli sets do). The result can have negative
/// eigenvalues; it is the warm start for mle_reconstruct. Throws on a
/// rank-deficient setting set.
Matrix linear_inversion(const std::vector<CountRecord>& records);

struct MleOptions {
  double param_tol = 1e-9;  // simplex diameter below this ...
  double ll_tol = 1e-9;     // ... and log-likelihood spread below this
  int max_evals = 100000;   // cap on likelihood evaluations
  int restarts = 3;
};

struct ReconstructionResult {
  DensityMatrix rho;
  double log_likelihood = 0.0;
  int iterations = 0;  // likelihood evaluations used
  bool converged = false;
};

/// Maximizes the Poissonian log-likelihood sum_i [n_i log mu_i - mu_i] with
/// mu_i = N Tr(Pi_i rho(t)) over the Cholesky-style parametrization
/// rho(t) = T(t)'T(t) / Tr[T(t)'T(t)], T lower triangular (4 real
/// parameters for one qubit, 16 for two). The flux N is profiled out
/// analytically. Derivative-free simplex descent with restarts, warm
/// started from the clamped linear inversion. A result that exhausts
/// max_evals is returned with converged = false.
ReconstructionResult mle_reconstruct(const std::vector<CountRecord>& records,
                                     const MleOptions& options = {});

/// Mixed-state fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);
/// Pure-target special case <psi| rho |psi>.
double fidelity(const DensityMatrix& rho, const Ket& psi);

/// Tr(rho^2).
double purity(const DensityMatrix& rho);

/// Concurrence squared: C = max(0, l1-l2-l3-l4) with l_i the descending
/// square-rooted eigenvalues of rho (Y(x)Y) rho* (Y(x)Y).
double tangle(const DensityMatrix& rho);

struct MetricReport {
  double fidelity = 0.0;            // against the reference state
  double purity = 0.0;              // in [1/dim, 1]
  std::optional<double> tangle;     // two-qubit states only
};

MetricReport metric_report(const DensityMatrix& rho, const DensityMatrix& reference);

/// Columnar CSV: setting_label, outcome_label, count, duration.
void write_counts_csv(std::ostream& os, const std::vector<CountRecord>& records);
/// Reads records back, resolving labels against the given analyzer set.
std::vector<CountRecord> read_counts_csv(
    std::istream& is, const std::vector<AnalyzerSetting>& known_settings);

}  // namespace povmcluster
