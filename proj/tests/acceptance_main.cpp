// Acceptance suite: end-to-end checks of the full pipeline, one printed
// pass/fail line per criterion. Returns the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "povmcluster/experiment.hpp"
#include "povmcluster/mbqc.hpp"
#include "povmcluster/povm.hpp"
#include "povmcluster/tomography.hpp"

namespace pc = povmcluster;

namespace {

constexpr double kPi = std::numbers::pi;

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass,
            const std::string& detail, double seconds) {
  std::printf("[%s] criterion %d: %s (%s, %.1fs)\n", pass ? "PASS" : "FAIL",
              criterion, name.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), format, a, b);
  return buf;
}

// 1. Four POVM constructions agree elementwise on a 20x20 grid, and every
//    grid point passes completeness/positivity diagnostics at 1e-10.
void criterion_1() {
  Timer timer;
  double worst_dev = 0.0;
  bool diagnostics_ok = true;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const double phi = kPi * i / 19.0;
      const double theta = -kPi + 2 * kPi * j / 19.0;
      const double gamma = pc::parameter_map(theta);
      const pc::Povm reference = pc::povm_experimental(phi, theta);
      const pc::Povm constructions[] = {
          pc::povm_chi(phi, gamma),
          pc::povm_from_ancilla(phi, gamma),
          pc::optical_model_povm(phi, theta),
      };
      for (const auto& povm : constructions) {
        for (pc::OutcomeLabel label : pc::kOutcomeOrder) {
          worst_dev = std::max(worst_dev,
                               pc::max_abs_diff(povm.element(label),
                                                reference.element(label)));
        }
        diagnostics_ok = diagnostics_ok && pc::validate(povm).pass;
      }
      diagnostics_ok = diagnostics_ok && pc::validate(reference).pass;
    }
  }
  const double seconds = timer.seconds();
  const bool pass = worst_dev < 1e-10 && diagnostics_ok && seconds < 10.0;
  report(1, "four POVM constructions agree on the angle grid", pass,
         fmt("max elementwise dev %.2e", worst_dev) +
             (diagnostics_ok ? ", diagnostics ok" : ", diagnostics FAILED"),
         seconds);
}

// 2. Circuit, three-qubit projective, and POVM routes all prepare
//    |psi(phi,theta)> on every branch over a 15x15 grid.
void criterion_2() {
  Timer timer;
  double worst = 0.0;
  const pc::DensityMatrix bell =
      pc::DensityMatrix::from_ket(pc::states::phi_plus());
  const pc::Ket chain = pc::states::linear_cluster(3);
  for (int i = 0; i < 15; ++i) {
    for (int j = 0; j < 15; ++j) {
      const double phi = kPi * i / 14.0;
      const double theta = -kPi + 2 * kPi * j / 14.0;
      const pc::Ket target = pc::states::psi(phi, theta);

      const pc::Ket circuit = pc::circuit_oracle(phi, theta);
      worst = std::max(worst, 1.0 - pc::fidelity(
                                        pc::DensityMatrix::from_ket(circuit),
                                        target));

      const pc::ProjectiveAngles angles = pc::projective_angles(phi, theta);
      for (const auto& branch : pc::run_projective_mbqc(
               chain,
               pc::MeasurementPlan{{angles.phi_prime, angles.gamma_prime}})) {
        if (!branch.corrected_output.has_value()) continue;
        worst = std::max(worst,
                         1.0 - pc::fidelity(*branch.corrected_output, target));
      }

      for (const auto& branch : pc::run_povm_mbqc(bell, phi, theta)) {
        worst = std::max(worst, 1.0 - pc::fidelity(*branch.output, target));
      }
    }
  }
  const double seconds = timer.seconds();
  const bool pass = worst < 1e-10 && seconds < 30.0;
  report(2, "circuit / projective / POVM routes agree with psi", pass,
         fmt("worst branch infidelity %.2e", worst), seconds);
}

// 3. Ideal noise, infinite statistics: F(rho_m, psi) > 1 - 1e-6 on all 206
//    settings and every branch probability is 1/4.
void criterion_3() {
  Timer timer;
  pc::ExperimentConfig config;
  config.settings_count = 200;
  config.noise = {pc::NoiseModel::ideal, 1.0, 0.0};
  config.infinite_statistics = true;
  const pc::RunReport run = pc::run_experiment(config);

  double worst_f = 1.0;
  for (const auto& row : run.rows) worst_f = std::min(worst_f, row.f_measured_target);

  const pc::DensityMatrix bell =
      pc::DensityMatrix::from_ket(pc::states::phi_plus());
  double worst_prob_dev = 0.0;
  for (const auto& setting : pc::generate_settings(200)) {
    for (const auto& branch :
         pc::run_povm_mbqc(bell, setting.phi, setting.theta)) {
      worst_prob_dev = std::max(worst_prob_dev,
                                std::abs(branch.probability - 0.25));
    }
  }
  const bool pass = run.rows.size() == 206 && run.reconstruction_failures == 0 &&
                    worst_f > 1.0 - 1e-6 && worst_prob_dev < 1e-10;
  report(3, "ideal end-to-end: 206 reconstructions at unit fidelity", pass,
         fmt("min F %.9f, max |p - 1/4| %.2e", worst_f, worst_prob_dev),
         timer.seconds());
}

// 4. Calibrated noise, infinite statistics: the simulated POVM/feedforward
//    introduces no error of its own.
void criterion_4() {
  Timer timer;
  pc::ExperimentConfig config;
  config.settings_count = 200;
  config.noise = pc::calibrated_noise();
  config.infinite_statistics = true;
  const pc::RunReport run = pc::run_experiment(config);
  const bool pass = run.reconstruction_failures == 0 &&
                    run.infid_expected_measured.mean < 1e-6;
  report(4, "software error bound under calibrated noise", pass,
         fmt("mean 1-F(rho_e,rho_m) = %.2e over %g settings",
             run.infid_expected_measured.mean,
             static_cast<double>(run.rows.size())),
         timer.seconds());
}

// 5. Calibrated noise with Poisson counts at 24000/setting: the Monte Carlo
//    mean of 1 - F(rho_e, rho_m) sits in the statistical regime
//    [2e-4, 5e-3].
void criterion_5() {
  Timer timer;
  pc::ExperimentConfig config;
  config.settings_count = 200;
  config.noise = pc::calibrated_noise();
  config.mean_counts_per_setting = 24000;
  config.seed = 20240101;
  const pc::MonteCarloSummary mc = pc::monte_carlo(config, 20);
  const double mean = mc.infid_expected_measured.mean;
  const double seconds = timer.seconds();
  const bool pass = mean >= 2e-4 && mean <= 5e-3 && seconds < 300.0;
  report(5, "statistical regime of 1-F(rho_e,rho_m) at 24000 counts", pass,
         fmt("Monte Carlo mean %.3e (band [2e-4, 5e-3]), 20 trials", mean),
         seconds);
}

// 6. Metric fixtures and the calibrated-state scalars.
void criterion_6() {
  Timer timer;
  const pc::Ket bell_minus = pc::states::phi_minus();
  const pc::DensityMatrix bell_minus_dm = pc::DensityMatrix::from_ket(bell_minus);
  const double f_fix = pc::fidelity(bell_minus_dm, bell_minus);
  const double t_fix = pc::tangle(bell_minus_dm);
  const double p_fix = pc::purity(pc::DensityMatrix::maximally_mixed(4));

  const pc::DensityMatrix calibrated = pc::noise_model(pc::calibrated_noise());
  const double p_cal = pc::purity(calibrated);
  const double f_cal = pc::fidelity(calibrated, pc::states::phi_plus());

  const bool pass = std::abs(f_fix - 1.0) < 1e-12 &&
                    std::abs(t_fix - 1.0) < 1e-10 &&
                    std::abs(p_fix - 0.25) < 1e-12 &&
                    std::abs(p_cal - 0.963) < 0.005 &&
                    std::abs(f_cal - 0.980) < 0.005;
  report(6, "metric fixtures and calibrated-state scalars", pass,
         fmt("purity %.4f (target 0.963), fidelity %.4f (target 0.980)", p_cal,
             f_cal),
         timer.seconds());
}

// 7. Tomography consistency: exact-frequency reconstructions recover random
//    states, and infidelity decreases monotonically with counts.
void criterion_7() {
  Timer timer;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto analyzers = pc::pauli_analyzers_1q();

  double worst_exact = 0.0;
  for (int t = 0; t < 100; ++t) {
    const double phi = std::acos(1.0 - 2.0 * u(rng));
    const double theta = -kPi + 2 * kPi * u(rng);
    const pc::Ket truth = pc::states::psi(phi, theta);
    const auto records = pc::exact_counts(pc::DensityMatrix::from_ket(truth),
                                          analyzers, 24000);
    const pc::ReconstructionResult r = pc::mle_reconstruct(records);
    worst_exact = std::max(worst_exact, 1.0 - pc::fidelity(r.rho, truth));
  }

  const pc::Ket truth = pc::states::psi(1.1, 0.6);
  const pc::DensityMatrix rho = pc::DensityMatrix::from_ket(truth);
  std::vector<double> means;
  for (double counts : {1e2, 1e3, 1e4, 1e5}) {
    double total = 0.0;
    for (int seed = 0; seed < 50; ++seed) {
      const auto records =
          pc::simulate_counts(rho, analyzers, counts, 40000 + seed);
      total += 1.0 - pc::fidelity(pc::mle_reconstruct(records).rho, truth);
    }
    means.push_back(total / 50);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < means.size(); ++i) {
    monotone = monotone && means[i] < means[i - 1];
  }

  const bool pass = worst_exact < 1e-8 && monotone;
  report(7, "tomography recovers exact data and improves with counts", pass,
         fmt("worst exact-data infidelity %.2e, infidelity chain %.1e -> ...",
             worst_exact, means.front()) +
             (monotone ? " monotone" : " NOT monotone"),
         timer.seconds());
}

// 8. Werner closed forms against the library metric routines.
void criterion_8() {
  Timer timer;
  const pc::Vector bell = pc::states::phi_plus().amplitudes();
  double worst = 0.0;
  for (double p : {0.0, 0.25, 1.0 / 3.0, 0.5, 0.973, 1.0}) {
    const pc::DensityMatrix w(p * (bell * bell.adjoint()).eval() +
                              (1 - p) * pc::Matrix::Identity(4, 4) / 4.0);
    const double purity_dev =
        std::abs(pc::purity(w) - (1 + 3 * p * p) / 4.0);
    const double c = std::max(0.0, (3 * p - 1) / 2.0);
    const double tangle_dev = std::abs(pc::tangle(w) - c * c);
    worst = std::max({worst, purity_dev, tangle_dev});
  }
  report(8, "werner closed forms for purity and concurrence", worst < 1e-10,
         fmt("max deviation %.2e", worst), timer.seconds());
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  }
  return g_failures;
}
