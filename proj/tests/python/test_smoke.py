import json
import math

import numpy as np
import pytest

import qgl

QUBIT = {
    "hamiltonian": {"kind": "pauli_z_chain", "n": 1, "params": {"fields": [1.0]}},
    "beta": 1.0,
    "jumps": [{"pauli": "X"}],
    "filter": {"kind": "gaussian", "param": 5.0},
    "weight": {"kind": "metropolis"},
    "grid": {"N": 64},
}


def config(experiment, **extra):
    return {"experiment": experiment, "instance": QUBIT, **extra}


def test_registered_experiments():
    names = qgl.registered_experiments()
    assert len(names) == 14
    assert "parseval" in names
    assert qgl.experiment_columns("fixed-point-scan")[0] == "sigma_t"


def test_gibbs_state_matches_closed_form():
    rho = qgl.gibbs_state(config("parseval"))
    z = math.exp(-1) + math.exp(1)
    assert np.allclose(rho, np.diag([math.exp(-1) / z, math.exp(1) / z]))


def test_generator_is_trace_preserving():
    dense = qgl.lindbladian(config("parseval"))
    assert dense.shape == (4, 4)
    # row-major vec of the identity
    trace_row = np.array([1, 0, 0, 1])
    assert np.allclose(trace_row @ dense, 0, atol=1e-12)


def test_fixed_point_close_to_gibbs():
    cfg = config("parseval")
    assert qgl.trace_distance(qgl.fixed_point(cfg), qgl.gibbs_state(cfg)) < 1e-2


def test_proxy_is_hermitian():
    proxy = qgl.discriminant_proxy(config("parseval"))
    assert np.abs(proxy - proxy.conj().T).max() < 1e-12


def test_run_experiment_accepts_json_text():
    rep = qgl.run_experiment(json.dumps(config("davies-exactness")))
    assert rep["columns"] == ["beta", "trace_distance", "adb_norm", "pass"]
    assert rep["failing"] == []
    assert float(rep["rows"][0][1]) < 1e-10


def test_report_csv_is_deterministic():
    cfg = config("secular-bound")
    assert qgl.report_csv(cfg) == qgl.report_csv(cfg)


def test_bad_configs_raise():
    with pytest.raises(qgl.ConfigError):
        qgl.run_experiment("{not json")
    with pytest.raises(qgl.QglError):
        qgl.run_experiment({"experiment": "parseval", "instance": {**QUBIT, "jumps": []}})
