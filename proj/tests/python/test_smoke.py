"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import povmcluster as pc


def test_states_and_gates():
    psi = pc.psi_state(math.pi / 2, 0.0)
    amps = np.asarray(psi.amplitudes)
    assert amps.shape == (2,)
    np.testing.assert_allclose(abs(amps), [1 / math.sqrt(2)] * 2, atol=1e-12)

    x = pc.gate("X")
    np.testing.assert_allclose(x, [[0, 1], [1, 0]], atol=1e-15)
    with pytest.raises(ValueError):
        pc.gate("nope")


def test_povm_completeness_and_agreement():
    phi, theta = 1.1, -0.6
    povm = pc.povm_experimental(phi, theta)
    total = sum(np.asarray(e) for e in povm.elements)
    np.testing.assert_allclose(total, np.eye(2), atol=1e-12)

    gamma = pc.parameter_map(theta)
    for other in (
        pc.povm_chi(phi, gamma),
        pc.povm_from_ancilla(phi, gamma),
        pc.optical_model_povm(phi, theta),
    ):
        for a, b in zip(povm.elements, other.elements):
            np.testing.assert_allclose(np.asarray(a), np.asarray(b), atol=1e-10)

    diag = pc.validate_povm(povm)
    assert diag["pass"]


def test_povm_mbqc_prepares_target():
    bell = pc.DensityMatrix.from_ket(pc.phi_plus())
    phi, theta = 0.8, 2.1
    target = np.asarray(pc.psi_state(phi, theta).amplitudes)
    target_rho = np.outer(target, target.conj())
    for branch in pc.run_povm_mbqc(bell, phi, theta):
        assert branch["probability"] == pytest.approx(0.25, abs=1e-12)
        np.testing.assert_allclose(np.asarray(branch["output"]), target_rho,
                                   atol=1e-12)

    rho_e = pc.expected_output(bell, phi, theta)
    np.testing.assert_allclose(np.asarray(rho_e.matrix), target_rho, atol=1e-12)


def test_metrics():
    bell = pc.DensityMatrix.from_ket(pc.phi_minus())
    assert pc.tangle(bell) == pytest.approx(1.0, abs=1e-10)
    assert pc.purity(pc.DensityMatrix.maximally_mixed(4)) == pytest.approx(0.25)
    assert pc.fidelity_with_ket(bell, pc.phi_minus()) == pytest.approx(1.0)


def test_tomography_round_trip():
    truth = pc.DensityMatrix.from_ket(pc.psi_state(1.2, 0.4))
    counts = pc.simulate_pauli_counts(truth, 24000, seed=5)
    assert len(counts) == 6
    result = pc.mle_reconstruct_pauli(counts, qubits=1)
    assert result["converged"]
    rho = pc.DensityMatrix(np.asarray(result["rho"]))
    assert pc.fidelity(rho, truth) > 0.99


def test_experiment_pipeline():
    config = pc.ExperimentConfig()
    config.settings_count = 0  # just the six eigenstate settings
    config.infinite_statistics = True
    report = pc.run_experiment(config)
    assert report["reconstruction_failures"] == 0
    assert report["f_measured_target"]["mean"] > 1 - 1e-6
    assert len(report["rows"]) == 6

    settings = pc.generate_settings(10)
    assert len(settings) == 16
