#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "povmcluster/experiment.hpp"
#include "povmcluster/mbqc.hpp"
#include "povmcluster/povm.hpp"
#include "povmcluster/tomography.hpp"

namespace py = pybind11;
using namespace povmcluster;

namespace {

py::dict diagnostics_dict(const PovmDiagnostics& d) {
  py::dict out;
  out["structure_ok"] = d.structure_ok;
  out["max_hermiticity_dev"] = d.max_hermiticity_dev;
  out["min_eigenvalue"] = d.min_eigenvalue;
  out["completeness_dev"] = d.completeness_dev;
  out["pass"] = d.pass;
  return out;
}

py::dict aggregate_dict(const Aggregate& a) {
  py::dict out;
  out["mean"] = a.mean;
  out["std_dev"] = a.std_dev;
  out["std_error"] = a.std_error;
  out["min"] = a.min;
  out["max"] = a.max;
  return out;
}

}  // namespace

PYBIND11_MODULE(_povmcluster, m) {
  m.doc() = "POVM-augmented cluster-state computation simulator";
  m.attr("__version__") = "0.1.0";

  py::enum_<OutcomeLabel>(m, "OutcomeLabel")
      .value("TT", OutcomeLabel::TT)
      .value("TR", OutcomeLabel::TR)
      .value("RT", OutcomeLabel::RT)
      .value("RR", OutcomeLabel::RR);

  py::class_<Ket>(m, "Ket")
      .def(py::init([](const Vector& v) { return Ket(v); }))
      .def_property_readonly("amplitudes",
                             [](const Ket& k) { return k.amplitudes(); })
      .def_property_readonly("dim", &Ket::dim)
      .def_property_readonly("qubit_count", &Ket::qubit_count);

  py::class_<DensityMatrix>(m, "DensityMatrix")
      .def(py::init([](const Matrix& mat) { return DensityMatrix(mat); }))
      .def_static("from_ket", &DensityMatrix::from_ket)
      .def_static("maximally_mixed", &DensityMatrix::maximally_mixed)
      .def_property_readonly("matrix",
                             [](const DensityMatrix& r) { return r.matrix(); })
      .def_property_readonly("dim", &DensityMatrix::dim)
      .def_property_readonly("qubit_count", &DensityMatrix::qubit_count);

  // quantum-core
  m.def("tensor",
        py::overload_cast<const Matrix&, const Matrix&>(&tensor));
  m.def("partial_trace",
        py::overload_cast<const Matrix&, int>(&partial_trace));
  m.def("psd_sqrt", &psd_sqrt);
  m.def("conjugate_entrywise", &conjugate_entrywise);
  m.def("gate", &gates::by_name, py::arg("name"));
  m.def("z_rotation", &gates::z_rotation);
  m.def("psi_state", &states::psi, py::arg("phi"), py::arg("theta"));
  m.def("chi_state", &states::chi, py::arg("phi"), py::arg("gamma"));
  m.def("alpha_plus", &states::alpha_plus);
  m.def("alpha_minus", &states::alpha_minus);
  m.def("phi_plus", &states::phi_plus);
  m.def("phi_minus", &states::phi_minus);
  m.def("linear_cluster", &states::linear_cluster, py::arg("n"));

  // povm
  py::class_<Povm>(m, "Povm")
      .def_property_readonly("elements",
                             [](const Povm& p) {
                               py::list out;
                               for (const auto& e : p.elements) out.append(e);
                               return out;
                             })
      .def("element", &Povm::element);
  m.def("povm_experimental", &povm_experimental, py::arg("phi"), py::arg("theta"));
  m.def("povm_chi", &povm_chi, py::arg("phi"), py::arg("gamma"));
  m.def("povm_from_ancilla", &povm_from_ancilla, py::arg("phi"), py::arg("gamma"));
  m.def("optical_model_povm", &optical_model_povm, py::arg("phi"), py::arg("theta"));
  m.def("parameter_map", &parameter_map, py::arg("theta"));
  m.def("sigma_for", [](OutcomeLabel l) { return sigma_for(l); });
  m.def("validate_povm",
        [](const Povm& p) { return diagnostics_dict(validate(p)); });
  m.def(
      "measure",
      [](const DensityMatrix& state, const Povm& p, int target_qubit) {
        py::list out;
        for (const auto& b : measure(state, p, target_qubit)) {
          py::dict row;
          row["label"] = b.label;
          row["probability"] = b.probability;
          row["post_state"] = b.post_state
                                  ? py::cast(b.post_state->matrix())
                                  : py::object(py::none());
          out.append(row);
        }
        return out;
      },
      py::arg("state"), py::arg("povm"), py::arg("target_qubit") = 1);

  // mbqc
  m.def("circuit_oracle", &circuit_oracle, py::arg("phi"), py::arg("theta"));
  m.def("projective_angles", [](double phi, double theta) {
    const ProjectiveAngles a = projective_angles(phi, theta);
    return py::make_tuple(a.phi_prime, a.gamma_prime);
  });
  m.def(
      "run_povm_mbqc",
      [](const DensityMatrix& resource, double phi, double theta) {
        py::list out;
        for (const auto& b : run_povm_mbqc(resource, phi, theta)) {
          py::dict row;
          row["label"] = b.label;
          row["probability"] = b.probability;
          row["output"] = b.output ? py::cast(b.output->matrix())
                                   : py::object(py::none());
          out.append(row);
        }
        return out;
      },
      py::arg("resource"), py::arg("phi"), py::arg("theta"));
  m.def("expected_output", &expected_output, py::arg("resource"),
        py::arg("phi"), py::arg("theta"));

  // tomography
  m.def("fidelity",
        py::overload_cast<const DensityMatrix&, const DensityMatrix&>(&fidelity));
  m.def("fidelity_with_ket",
        py::overload_cast<const DensityMatrix&, const Ket&>(&fidelity));
  m.def("purity", &purity);
  m.def("tangle", &tangle);
  m.def("metric_report", [](const DensityMatrix& rho, const DensityMatrix& ref) {
    const MetricReport r = metric_report(rho, ref);
    py::dict out;
    out["fidelity"] = r.fidelity;
    out["purity"] = r.purity;
    out["tangle"] = r.tangle ? py::cast(*r.tangle) : py::object(py::none());
    return out;
  });
  m.def(
      "mle_reconstruct_pauli",
      [](const std::vector<double>& counts, int qubits) {
        const auto analyzers =
            qubits == 1 ? pauli_analyzers_1q() : pauli_analyzers_2q();
        if (counts.size() != analyzers.size()) {
          throw std::invalid_argument("expected one count per analyzer setting");
        }
        std::vector<CountRecord> records;
        for (std::size_t i = 0; i < analyzers.size(); ++i) {
          records.push_back({analyzers[i], std::nullopt, counts[i], 8.0});
        }
        const ReconstructionResult r = mle_reconstruct(records);
        py::dict out;
        out["rho"] = r.rho.matrix();
        out["log_likelihood"] = r.log_likelihood;
        out["iterations"] = r.iterations;
        out["converged"] = r.converged;
        return out;
      },
      py::arg("counts"), py::arg("qubits") = 1,
      "Reconstruct from counts ordered as the Pauli analyzer set (H, V, D, "
      "A, R, L, or their 36 products).");
  m.def(
      "simulate_pauli_counts",
      [](const DensityMatrix& rho, double mean_total, std::uint64_t seed) {
        const auto analyzers =
            rho.qubit_count() == 1 ? pauli_analyzers_1q() : pauli_analyzers_2q();
        std::vector<double> counts;
        for (const auto& r : simulate_counts(rho, analyzers, mean_total, seed)) {
          counts.push_back(r.count);
        }
        return counts;
      },
      py::arg("rho"), py::arg("mean_total"), py::arg("seed"));

  // experiment
  py::class_<NoiseParams>(m, "NoiseParams")
      .def(py::init([](const std::string& model, double p, double dephasing) {
             return NoiseParams{noise_model_from_string(model), p, dephasing};
           }),
           py::arg("model") = "ideal", py::arg("p") = 1.0,
           py::arg("dephasing") = 0.0)
      .def_readwrite("p", &NoiseParams::p)
      .def_readwrite("dephasing", &NoiseParams::dephasing);
  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("settings_count", &ExperimentConfig::settings_count)
      .def_readwrite("noise", &ExperimentConfig::noise)
      .def_readwrite("mean_counts_per_setting",
                     &ExperimentConfig::mean_counts_per_setting)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("infinite_statistics",
                     &ExperimentConfig::infinite_statistics)
      .def_readwrite("duration_s", &ExperimentConfig::duration_s);
  m.def("generate_settings", [](int n) {
    py::list out;
    for (const auto& s : generate_settings(n)) {
      py::dict row;
      row["phi"] = s.phi;
      row["theta"] = s.theta;
      row["label"] = s.label;
      out.append(row);
    }
    return out;
  });
  m.def("noise_model", &noise_model);
  m.def("calibrated_noise", &calibrated_noise);
  m.def(
      "run_experiment",
      [](const ExperimentConfig& config) {
        const RunReport report = run_experiment(config);
        py::dict out;
        out["reconstruction_failures"] = report.reconstruction_failures;
        out["f_measured_target"] = aggregate_dict(report.f_measured_target);
        out["f_expected_target"] = aggregate_dict(report.f_expected_target);
        out["infid_expected_measured"] =
            aggregate_dict(report.infid_expected_measured);
        py::list rows;
        for (const auto& row : report.rows) {
          py::dict r;
          r["label"] = row.setting.label;
          r["phi"] = row.setting.phi;
          r["theta"] = row.setting.theta;
          r["f_measured_target"] = row.f_measured_target;
          r["f_expected_target"] = row.f_expected_target;
          r["infid_expected_measured"] = row.infid_expected_measured;
          r["converged"] = row.converged;
          rows.append(r);
        }
        out["rows"] = rows;
        return out;
      },
      py::arg("config"));
  m.def("write_report_files",
        [](const ExperimentConfig& config, const std::filesystem::path& dir) {
          write_report(run_experiment(config), dir);
        });
}
