#include "povmcluster/experiment.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace povmcluster {

namespace {

constexpr double kPi = std::numbers::pi;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  return os;
}

}  // namespace

std::vector<MeasurementSetting> generate_settings(int n) {
  if (n < 0) throw std::invalid_argument("generate_settings: n must be >= 0");
  std::vector<MeasurementSetting> out;
  out.reserve(6 + n);
  out.push_back({0.0, 0.0, "H"});
  out.push_back({kPi, 0.0, "V"});
  out.push_back({kPi / 2, 0.0, "D"});
  out.push_back({kPi / 2, kPi, "A"});
  out.push_back({kPi / 2, kPi / 2, "R"});
  out.push_back({kPi / 2, -kPi / 2, "L"});
  // Fibonacci lattice: midpoint heights with golden-angle azimuths.
  const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < n; ++k) {
    const double z = 1.0 - (2.0 * k + 1.0) / n;
    double azimuth = std::fmod(k * golden_angle, 2.0 * kPi);
    if (azimuth > kPi) azimuth -= 2.0 * kPi;
    char label[32];
    std::snprintf(label, sizeof(label), "fib_%03d", k);
    out.push_back({std::acos(z), azimuth, label});
  }
  return out;
}

NoiseModel noise_model_from_string(const std::string& s) {
  if (s == "ideal") return NoiseModel::ideal;
  if (s == "werner") return NoiseModel::werner;
  if (s == "dephased_werner") return NoiseModel::dephased_werner;
  throw std::invalid_argument("unknown noise model: " + s);
}

std::string to_string(NoiseModel m) {
  switch (m) {
    case NoiseModel::ideal: return "ideal";
    case NoiseModel::werner: return "werner";
    case NoiseModel::dephased_werner: return "dephased_werner";
  }
  throw std::invalid_argument("invalid noise model");
}

DensityMatrix noise_model(const NoiseParams& params) {
  if (params.p < 0 || params.p > 1 || params.dephasing < 0 ||
      params.dephasing > 1) {
    throw std::invalid_argument("noise_model: parameters out of range");
  }
  const Ket bell = states::phi_plus();
  if (params.model == NoiseModel::ideal) {
    return DensityMatrix::from_ket(bell);
  }
  Matrix rho = params.p * (bell.amplitudes() * bell.amplitudes().adjoint()) +
               (1.0 - params.p) * Matrix::Identity(4, 4) / 4.0;
  if (params.model == NoiseModel::dephased_werner) {
    rho(0, 3) *= 1.0 - params.dephasing;
    rho(3, 0) *= 1.0 - params.dephasing;
  }
  return DensityMatrix(rho);
}

NoiseParams calibrated_noise() {
  return {NoiseModel::dephased_werner, 1.0, 0.0381968};
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.settings_count = j.value("settings_count", c.settings_count);
  if (j.contains("noise_model")) {
    c.noise.model = noise_model_from_string(j.at("noise_model").get<std::string>());
  }
  c.noise.p = j.value("noise_p", c.noise.p);
  c.noise.dephasing = j.value("noise_dephasing", c.noise.dephasing);
  c.mean_counts_per_setting =
      j.value("mean_counts_per_setting", c.mean_counts_per_setting);
  c.seed = j.value("seed", c.seed);
  c.infinite_statistics = j.value("infinite_statistics", c.infinite_statistics);
  c.duration_s = j.value("duration_s", c.duration_s);
  c.max_reconstruction_failures =
      j.value("max_reconstruction_failures", c.max_reconstruction_failures);
  if (c.settings_count < 0 || c.mean_counts_per_setting <= 0 ||
      c.duration_s <= 0) {
    throw std::invalid_argument("config: counts and duration must be positive");
  }
  return c;
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  return nlohmann::json{
      {"settings_count", c.settings_count},
      {"noise_model", to_string(c.noise.model)},
      {"noise_p", c.noise.p},
      {"noise_dephasing", c.noise.dephasing},
      {"mean_counts_per_setting", c.mean_counts_per_setting},
      {"seed", c.seed},
      {"infinite_statistics", c.infinite_statistics},
      {"duration_s", c.duration_s},
      {"max_reconstruction_failures", c.max_reconstruction_failures},
  };
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config " + path.string());
  nlohmann::json j;
  is >> j;
  return config_from_json(j);
}

Aggregate aggregate_of(const std::vector<double>& values) {
  Aggregate a;
  if (values.empty()) return a;
  double sum = 0.0;
  a.min = values.front();
  a.max = values.front();
  for (double v : values) {
    sum += v;
    a.min = std::min(a.min, v);
    a.max = std::max(a.max, v);
  }
  a.mean = sum / values.size();
  double sq = 0.0;
  for (double v : values) sq += (v - a.mean) * (v - a.mean);
  a.std_dev = values.size() > 1 ? std::sqrt(sq / (values.size() - 1)) : 0.0;
  a.std_error = a.std_dev / std::sqrt(static_cast<double>(values.size()));
  return a;
}

Histogram histogram_of(const std::vector<double>& values) {
  Histogram h;
  const int bins = static_cast<int>(std::round((h.hi - h.lo) / h.bin_width));
  h.counts.assign(bins, 0);
  for (double v : values) {
    if (v < h.lo) {
      ++h.below;
    } else if (v >= h.hi) {
      // The closed upper edge lands in the last bin.
      if (v <= h.hi + 1e-12) {
        ++h.counts.back();
      } else {
        ++h.above;
      }
    } else {
      ++h.counts[static_cast<int>((v - h.lo) / h.bin_width)];
    }
  }
  return h;
}

RunReport run_experiment(const ExperimentConfig& config) {
  RunReport report;
  report.config = config;
  const auto settings = generate_settings(config.settings_count);
  const DensityMatrix resource = noise_model(config.noise);
  const auto analyzers = pauli_analyzers_1q();

  std::vector<double> f_measured, f_expected, infid;
  for (std::size_t i = 0; i < settings.size(); ++i) {
    const auto& setting = settings[i];
    const DensityMatrix rho_e =
        expected_output(resource, setting.phi, setting.theta);
    const Ket target = states::psi(setting.phi, setting.theta);
    const auto branches = run_povm_mbqc(resource, setting.phi, setting.theta);

    // Counts per analyzer and POVM outcome; the outcome-n population is
    // the corrected branch state weighted by its probability, mirroring
    // the Pockels cells firing before the analyzer.
    const std::uint64_t setting_seed = config.seed ^ static_cast<std::uint64_t>(i);
    std::vector<CountRecord> records;
    records.reserve(analyzers.size() * branches.size());
    for (const auto& branch : branches) {
      if (!branch.output.has_value()) continue;
      const double branch_mean =
          config.mean_counts_per_setting * branch.probability;
      std::vector<CountRecord> outcome_records;
      if (config.infinite_statistics) {
        outcome_records =
            exact_counts(*branch.output, analyzers, branch_mean, config.duration_s);
      } else {
        outcome_records = simulate_counts(
            *branch.output, analyzers, branch_mean,
            setting_seed * 4 + outcome_index(branch.label), config.duration_s);
      }
      for (auto& r : outcome_records) r.outcome = branch.label;
      records.insert(records.end(), outcome_records.begin(), outcome_records.end());
    }

    // Aggregate over outcomes: the corrected populations share one analyzer.
    std::vector<CountRecord> aggregated;
    aggregated.reserve(analyzers.size());
    for (const auto& analyzer : analyzers) {
      CountRecord sum{analyzer, std::nullopt, 0.0, config.duration_s};
      for (const auto& r : records) {
        if (r.setting.label == analyzer.label) sum.count += r.count;
      }
      aggregated.push_back(std::move(sum));
    }

    SettingResult row;
    row.setting = setting;
    row.f_expected_target = fidelity(rho_e, target);
    try {
      const ReconstructionResult rec = mle_reconstruct(aggregated);
      row.converged = rec.converged;
      row.iterations = rec.iterations;
      if (!rec.converged) throw std::runtime_error("mle did not converge");
      row.f_measured_target = fidelity(rec.rho, target);
      row.infid_expected_measured = 1.0 - fidelity(rho_e, rec.rho);
      f_measured.push_back(row.f_measured_target);
      f_expected.push_back(row.f_expected_target);
      infid.push_back(row.infid_expected_measured);
    } catch (const std::exception&) {
      row.converged = false;
      ++report.reconstruction_failures;
    }
    report.rows.push_back(std::move(row));
    report.counts.insert(report.counts.end(), records.begin(), records.end());
  }

  report.f_measured_target = aggregate_of(f_measured);
  report.f_expected_target = aggregate_of(f_expected);
  report.infid_expected_measured = aggregate_of(infid);
  report.f_measured_histogram = histogram_of(f_measured);
  return report;
}

MonteCarloSummary monte_carlo(const ExperimentConfig& config, int trials) {
  if (trials < 1) throw std::invalid_argument("monte_carlo: trials must be >= 1");
  MonteCarloSummary summary;
  summary.config = config;
  std::vector<double> f_measured, f_expected, infid, pooled_f;
  for (int t = 0; t < trials; ++t) {
    ExperimentConfig trial_config = config;
    trial_config.seed = config.seed + static_cast<std::uint64_t>(t);
    const RunReport report = run_experiment(trial_config);
    TrialSummary trial;
    trial.seed = trial_config.seed;
    trial.mean_f_measured_target = report.f_measured_target.mean;
    trial.mean_f_expected_target = report.f_expected_target.mean;
    trial.mean_infid_expected_measured = report.infid_expected_measured.mean;
    trial.reconstruction_failures = report.reconstruction_failures;
    summary.trials.push_back(trial);
    f_measured.push_back(trial.mean_f_measured_target);
    f_expected.push_back(trial.mean_f_expected_target);
    infid.push_back(trial.mean_infid_expected_measured);
    for (const auto& row : report.rows) {
      if (row.converged) pooled_f.push_back(row.f_measured_target);
    }
  }
  summary.f_measured_target = aggregate_of(f_measured);
  summary.f_expected_target = aggregate_of(f_expected);
  summary.infid_expected_measured = aggregate_of(infid);
  summary.f_measured_histogram = histogram_of(pooled_f);
  return summary;
}

void write_settings_csv(std::ostream& os,
                        const std::vector<MeasurementSetting>& settings) {
  os << "index,label,phi,theta\n";
  for (std::size_t i = 0; i < settings.size(); ++i) {
    os << i << ',' << settings[i].label << ',' << format_double(settings[i].phi)
       << ',' << format_double(settings[i].theta) << '\n';
  }
}

namespace {

void write_histogram_csv(const std::filesystem::path& path, const Histogram& h) {
  auto os = open_output(path);
  os << "bin_center,count\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    os << format_double(h.lo + (b + 0.5) * h.bin_width) << ',' << h.counts[b]
       << '\n';
  }
}

nlohmann::json aggregate_json(const Aggregate& a) {
  return nlohmann::json{{"mean", a.mean},
                        {"std_dev", a.std_dev},
                        {"std_error", a.std_error},
                        {"min", a.min},
                        {"max", a.max}};
}

}  // namespace

void write_report(const RunReport& report, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);

  {
    auto os = open_output(out_dir / "settings.csv");
    std::vector<MeasurementSetting> settings;
    settings.reserve(report.rows.size());
    for (const auto& row : report.rows) settings.push_back(row.setting);
    write_settings_csv(os, settings);
  }
  {
    auto os = open_output(out_dir / "report.csv");
    os << "index,label,phi,theta,f_measured_target,f_expected_target,"
          "infid_expected_measured,converged,iterations\n";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      const auto& row = report.rows[i];
      os << i << ',' << row.setting.label << ','
         << format_double(row.setting.phi) << ','
         << format_double(row.setting.theta) << ','
         << format_double(row.f_measured_target) << ','
         << format_double(row.f_expected_target) << ','
         << format_double(row.infid_expected_measured) << ','
         << (row.converged ? 1 : 0) << ',' << row.iterations << '\n';
    }
  }
  {
    auto os = open_output(out_dir / "counts.csv");
    write_counts_csv(os, report.counts);
  }
  write_histogram_csv(out_dir / "hist_f_measured.csv",
                      report.f_measured_histogram);
  {
    nlohmann::ordered_json j;
    j["config"] = config_to_json(report.config);
    j["n_settings"] = report.rows.size();
    j["reconstruction_failures"] = report.reconstruction_failures;
    j["f_measured_target"] = aggregate_json(report.f_measured_target);
    j["f_expected_target"] = aggregate_json(report.f_expected_target);
    j["infid_expected_measured"] = aggregate_json(report.infid_expected_measured);
    j["histogram_below_range"] = report.f_measured_histogram.below;
    j["histogram_above_range"] = report.f_measured_histogram.above;
    auto os = open_output(out_dir / "summary.json");
    os << j.dump(2) << '\n';
  }
}

void write_monte_carlo(const MonteCarloSummary& summary,
                       const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    auto os = open_output(out_dir / "trials.csv");
    os << "trial,seed,mean_f_measured_target,mean_f_expected_target,"
          "mean_infid_expected_measured,reconstruction_failures\n";
    for (std::size_t t = 0; t < summary.trials.size(); ++t) {
      const auto& trial = summary.trials[t];
      os << t << ',' << trial.seed << ','
         << format_double(trial.mean_f_measured_target) << ','
         << format_double(trial.mean_f_expected_target) << ','
         << format_double(trial.mean_infid_expected_measured) << ','
         << trial.reconstruction_failures << '\n';
    }
  }
  write_histogram_csv(out_dir / "hist_f_measured.csv",
                      summary.f_measured_histogram);
  {
    nlohmann::ordered_json j;
    j["config"] = config_to_json(summary.config);
    j["trials"] = summary.trials.size();
    j["mean_f_measured_target"] = aggregate_json(summary.f_measured_target);
    j["mean_f_expected_target"] = aggregate_json(summary.f_expected_target);
    j["mean_infid_expected_measured"] =
        aggregate_json(summary.infid_expected_measured);
    auto os = open_output(out_dir / "mc_summary.json");
    os << j.dump(2) << '\n';
  }
}

}  // namespace povmcluster
