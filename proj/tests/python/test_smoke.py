import math

import numpy as np
import pytest

import opensys


def half_superposition():
    return np.full((2, 2), 0.5, dtype=complex)


def test_two_level_hamiltonian_superop_layout():
    h = opensys.two_level_hamiltonian(0.7, 0.3, -0.2)
    l = opensys.hamiltonian_superop(h)
    assert l.shape == (4, 4)
    assert l[1, 1] == pytest.approx(-2j * 0.7)
    assert l[2, 2] == pytest.approx(2j * 0.7)
    assert abs(l[0, 0]) == 0.0


def test_propagation_matches_analytic():
    gamma = np.array([[0.0, 0.7], [0.2, 0.0]])
    big = np.array([[0.0, 0.6], [0.6, 0.0]])
    l = opensys.dissipator_from_rates(gamma, big)
    rho0 = np.array([[0.3, 0.2 - 0.1j], [0.2 + 0.1j, 0.7]])
    for t in (0.1, 1.0, 5.0):
        got = opensys.propagate(l, rho0, t)
        want = opensys.two_level_analytic(rho0, 0.7, 0.2, 0.6, t)
        assert np.max(np.abs(got - want)) < 1e-9


def test_mat_exp_against_eigendecomposition():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    h = 0.5 * (a + a.conj().T)
    w, v = np.linalg.eigh(h)
    want = v @ np.diag(np.exp(-1j * w)) @ v.conj().T
    assert np.max(np.abs(opensys.mat_exp(-1j * h) - want)) < 1e-12


def test_two_level_constraint():
    det = opensys.two_level_det(half_superposition(), 1.0, 0.0, 0.4, 1.0)
    assert det == pytest.approx(0.25 * (math.exp(-1) - math.exp(-0.8)), abs=1e-12)
    assert not opensys.check_two_level(1.0, 0.0, 0.4)["satisfied"]
    assert opensys.check_two_level(1.0, 0.0, 0.5)["satisfied"]


def test_check_n_level_witnesses():
    gamma = np.zeros((3, 3))
    big = np.zeros((3, 3))
    big[0, 1] = big[1, 0] = 1.0
    report = opensys.check_n_level(gamma, big)
    assert not report["satisfied"]
    ids = [v["id"] for v in report["violations"]]
    assert "allocation[3]" in ids


def test_check_state_detects_negative_eigenvalue():
    bad = np.array([[1.2, 0.0], [0.0, -0.2]])
    d = opensys.check_state(bad)
    assert not d["is_physical"]
    assert d["min_eigenvalue"] == pytest.approx(-0.2)


def test_lindblad_generator_is_trace_preserving():
    rng = np.random.default_rng(5)
    ops = [rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(2)]
    l = opensys.lindblad_superop(ops, hamiltonian=np.diag([0.0, 1.0, 2.5]))
    spectrum = opensys.generator_spectrum(l)
    assert np.max(spectrum.real) < 1e-9
    assert np.min(np.abs(spectrum)) < 1e-9
    rho = opensys.propagate(l, np.eye(3) / 3, 2.0)
    assert abs(np.trace(rho) - 1) < 1e-10


def test_kraus_composition_and_invertibility():
    composed = opensys.compose_kraus(opensys.amplitude_damping(0.3), opensys.amplitude_damping(0.5))
    assert len(composed) == 4
    direct = opensys.kraus_to_superop(opensys.amplitude_damping(0.3 + 0.5 - 0.15))
    assert np.max(np.abs(opensys.kraus_to_superop(composed) - direct)) < 1e-12
    assert opensys.is_invertible_element([np.array([[0, 1], [1, 0]], dtype=complex)])
    assert not opensys.is_invertible_element(opensys.amplitude_damping(0.3))
    with pytest.raises(ValueError):
        opensys.validate_kraus([np.eye(2) * 2])


def test_builtin_scenarios_run():
    names = opensys.builtin_scenario_names()
    assert "unpopulated-third-level" in names
    series = opensys.run_scenario("unpopulated-third-level")
    assert len(series["records"]) == 101
    states = opensys.series_states(series)
    assert states.shape == (101, 3, 3)
    assert np.all(states[:, 2, :] == 0)
    violating = opensys.run_scenario(opensys.builtin_scenario("equal-superposition"))
    assert min(r["min_eig"] for r in violating["records"]) < -1e-4
    assert opensys.series_to_csv(series).startswith("t,")


def test_bad_scenario_reports_path():
    spec = opensys.builtin_scenario("pure-dephasing")
    spec["time_grid"] = [1.0, 0.5]
    with pytest.raises(ValueError, match="time_grid"):
        opensys.run_scenario(spec)
