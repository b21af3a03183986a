import json
import math

import numpy as np
import pytest

import veselova


def test_reduced_hamiltonian():
    q = np.array([1.0, 0.0, 0.0])
    p = np.array([0.0, 1.0, 0.0])
    assert veselova.hamiltonian_reduced([1, 2, 3], q, p) == pytest.approx(1 / 6, rel=1e-14)
    qd, pd = veselova.vector_field_reduced([1, 2, 3], q, p)
    assert np.allclose(qd, [0, 1 / 3, 0])
    assert np.allclose(pd, [-1 / 3, 0, 0])


def test_measure_density():
    assert veselova.measure_density([1, 2, 3], np.array([1.0, 0, 0])) == pytest.approx(math.sqrt(1 / 12))


def test_full_integration_conserves_energy():
    g, om = veselova.random_admissible_state([1, 2, 3, 4], seed=3)
    h0 = veselova.energy([1, 2, 3, 4], om)
    g1, om1 = veselova.integrate_full([1, 2, 3, 4], g, om, dt=1e-3, steps=2000)
    assert abs(veselova.energy([1, 2, 3, 4], om1) - h0) / h0 < 1e-10
    assert veselova.max_constraint_residual(g1, om1) < 1e-12
    assert np.allclose(g1 @ g1.T, np.eye(4), atol=1e-12)


def test_fj_matrix():
    a = veselova.fj_matrix([1, 2, 3])
    assert np.allclose(a, [1.549193, 1.936492, 2.581989], atol=1e-6)
    assert veselova.fj_matrix([1, 2, 3, 4]) is None


def test_stability():
    h, stable = veselova.stability_hessian([1, 2, 3], 0, 1, 2.0)
    assert h[0, 0] == pytest.approx(-144.0)
    assert stable


def test_symmetry_and_errors():
    assert veselova.symmetry_class([1, 1, 2, 2]) == "cylindrical"
    with pytest.raises(veselova.VeselovaError):
        veselova.hamiltonian_reduced([1, -2, 3], np.array([1.0, 0, 0]), np.zeros(3))


def test_run_config():
    cfg = {"schema_version": 1, "mode": "reduced", "mass": [1, 2, 3], "seed": 4, "integrator": {"steps": 1000}}
    report = json.loads(veselova.run_config(json.dumps(cfg)))
    assert report["mode"] == "reduced"
    assert report["drifts"]["H"] < 1e-10
    with pytest.raises(veselova.ConfigError):
        veselova.run_config(json.dumps({"schema_version": 1, "mode": "cyl", "mass": [2, 2, 2, 2]}))


def test_base_frequencies():
    t = np.arange(8192) * 0.1
    count, basis, _ = veselova.base_frequencies([np.cos(1.0 * t) + 0.5 * np.cos(math.sqrt(2) * t)], 0.1)
    assert count == 2
