// Command-line harness for the POVM cluster-computation pipeline.
//
// Exit codes: 0 success, 1 validation failure, 2 reconstruction failures
// exceeded the configured threshold.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#include <CLI11.hpp>

#include "povmcluster/experiment.hpp"
#include "povmcluster/mbqc.hpp"
#include "povmcluster/povm.hpp"
#include "povmcluster/tomography.hpp"

namespace pc = povmcluster;

namespace {

int cmd_generate_settings(int n, const std::string& out_path) {
  const auto settings = pc::generate_settings(n);
  std::ofstream os(out_path);
  if (!os) {
    std::cerr << "cannot open " << out_path << "\n";
    return 1;
  }
  pc::write_settings_csv(os, settings);
  std::cout << "wrote " << settings.size() << " settings to " << out_path << "\n";
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
  const pc::ExperimentConfig config = pc::load_config(config_path);
  const pc::RunReport report = pc::run_experiment(config);
  pc::write_report(report, out_dir);
  std::printf("settings: %zu  failures: %d\n", report.rows.size(),
              report.reconstruction_failures);
  std::printf("mean F(rho_m, psi)      = %.6f +- %.6f\n",
              report.f_measured_target.mean, report.f_measured_target.std_error);
  std::printf("mean F(rho_e, psi)      = %.6f +- %.6f\n",
              report.f_expected_target.mean, report.f_expected_target.std_error);
  std::printf("mean 1 - F(rho_e,rho_m) = %.3e +- %.3e\n",
              report.infid_expected_measured.mean,
              report.infid_expected_measured.std_error);
  if (report.reconstruction_failures > config.max_reconstruction_failures) {
    std::cerr << "reconstruction failures exceeded threshold\n";
    return 2;
  }
  return 0;
}

int cmd_monte_carlo(const std::string& config_path, int trials,
                    const std::string& out_dir) {
  const pc::ExperimentConfig config = pc::load_config(config_path);
  const pc::MonteCarloSummary summary = pc::monte_carlo(config, trials);
  pc::write_monte_carlo(summary, out_dir);
  int failures = 0;
  for (const auto& t : summary.trials) failures += t.reconstruction_failures;
  std::printf("trials: %zu  total reconstruction failures: %d\n",
              summary.trials.size(), failures);
  std::printf("mean of mean F(rho_m, psi)      = %.6f (std %.2e)\n",
              summary.f_measured_target.mean, summary.f_measured_target.std_dev);
  std::printf("mean of mean 1 - F(rho_e,rho_m) = %.3e (std %.2e)\n",
              summary.infid_expected_measured.mean,
              summary.infid_expected_measured.std_dev);
  if (failures > config.max_reconstruction_failures) {
    std::cerr << "reconstruction failures exceeded threshold\n";
    return 2;
  }
  return 0;
}

int cmd_validate_povm(double phi, double theta) {
  const double gamma = pc::parameter_map(theta);
  struct Entry {
    const char* name;
    pc::Povm povm;
  };
  const Entry entries[] = {
      {"experimental", pc::povm_experimental(phi, theta)},
      {"chi", pc::povm_chi(phi, gamma)},
      {"ancilla", pc::povm_from_ancilla(phi, gamma)},
      {"optical", pc::optical_model_povm(phi, theta)},
  };
  bool ok = true;
  std::printf("phi = %.9g, theta = %.9g, gamma(theta) = %.9g\n", phi, theta, gamma);
  for (const auto& entry : entries) {
    const pc::PovmDiagnostics d = pc::validate(entry.povm);
    std::printf(
        "%-12s hermiticity_dev = %.3e  min_eigenvalue = % .3e  "
        "completeness_dev = %.3e  %s\n",
        entry.name, d.max_hermiticity_dev, d.min_eigenvalue, d.completeness_dev,
        d.pass ? "pass" : "FAIL");
    ok = ok && d.pass;
  }
  double max_dev = 0.0;
  for (const auto& entry : entries) {
    for (pc::OutcomeLabel label : pc::kOutcomeOrder) {
      max_dev = std::max(max_dev,
                         pc::max_abs_diff(entry.povm.element(label),
                                          entries[0].povm.element(label)));
    }
  }
  std::printf("max elementwise deviation across constructions = %.3e  %s\n",
              max_dev, max_dev <= 1e-10 ? "pass" : "FAIL");
  ok = ok && max_dev <= 1e-10;
  return ok ? 0 : 1;
}

int cmd_oracle_check(int grid) {
  double worst = 0.0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double phi = std::numbers::pi * i / (grid - 1.0);
      const double theta =
          -std::numbers::pi + 2.0 * std::numbers::pi * j / (grid - 1.0);
      const pc::Ket target = pc::states::psi(phi, theta);
      const pc::DensityMatrix target_dm = pc::DensityMatrix::from_ket(target);

      const pc::Ket circuit = pc::circuit_oracle(phi, theta);
      worst = std::max(
          worst, 1.0 - pc::fidelity(pc::DensityMatrix::from_ket(circuit), target));

      const pc::ProjectiveAngles angles = pc::projective_angles(phi, theta);
      const auto branches = pc::run_projective_mbqc(
          pc::states::linear_cluster(3),
          pc::MeasurementPlan{{angles.phi_prime, angles.gamma_prime}});
      for (const auto& branch : branches) {
        if (!branch.corrected_output.has_value()) continue;
        worst = std::max(worst,
                         1.0 - pc::fidelity(*branch.corrected_output, target));
      }

      const auto povm_branches = pc::run_povm_mbqc(
          pc::DensityMatrix::from_ket(pc::states::phi_plus()), phi, theta);
      for (const auto& branch : povm_branches) {
        worst = std::max(worst, 1.0 - pc::fidelity(*branch.output, target));
      }
      (void)target_dm;
    }
  }
  std::printf("oracle agreement over %dx%d grid: worst infidelity = %.3e  %s\n",
              grid, grid, worst, worst <= 1e-10 ? "pass" : "FAIL");
  return worst <= 1e-10 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"POVM-augmented cluster-state computation simulator"};
  app.require_subcommand(1);

  int n_settings = 200;
  std::string settings_out = "settings.csv";
  auto* gen = app.add_subcommand("generate-settings",
                                 "Write the measurement settings CSV");
  gen->add_option("--n", n_settings, "generated settings beyond the fixed six");
  gen->add_option("--out", settings_out, "output CSV path");

  std::string config_path;
  std::string run_out = "report";
  auto* run = app.add_subcommand("run", "Run the full experiment pipeline");
  run->add_option("--config", config_path, "JSON config path")->required();
  run->add_option("--out", run_out, "output directory");

  std::string mc_config;
  std::string mc_out = "monte_carlo";
  int trials = 50;
  auto* mc = app.add_subcommand("monte-carlo",
                                "Repeat the experiment over derived seeds");
  mc->add_option("--config", mc_config, "JSON config path")->required();
  mc->add_option("--trials", trials, "number of trials");
  mc->add_option("--out", mc_out, "output directory");

  double phi = 0.0, theta = 0.0;
  auto* validate = app.add_subcommand(
      "validate-povm", "Cross-validate the four POVM constructions");
  validate->add_option("--phi", phi, "polar angle (radians)")->required();
  validate->add_option("--theta", theta, "azimuthal angle (radians)")->required();

  int grid = 15;
  auto* oracle = app.add_subcommand(
      "oracle-check", "Check circuit / projective / POVM route agreement");
  oracle->add_option("--grid", grid, "grid points per angle");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate_settings(n_settings, settings_out);
    if (run->parsed()) return cmd_run(config_path, run_out);
    if (mc->parsed()) return cmd_monte_carlo(mc_config, trials, mc_out);
    if (validate->parsed()) return cmd_validate_povm(phi, theta);
    if (oracle->parsed()) return cmd_oracle_check(grid);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
