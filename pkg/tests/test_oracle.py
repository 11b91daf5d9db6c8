import ast
import math
from pathlib import Path

import numpy as np
import pytest

import quasibell.oracle as orc
from quasibell import fock_numerics as fn
from quasibell import quasi_bell as qb
from quasibell import teleport_protocol as tp
from quasibell.errors import BasisUndefinedError, InvalidArgumentError, TruncationError

HALF = math.sqrt(math.log(2.0) / 2.0)


class Labels:
    def __init__(self, alpha, beta):
        self.alpha, self.beta = alpha, beta


def test_oracle_is_independent_of_closed_forms():
    tree = ast.parse(Path(orc.__file__).read_text())
    imported = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom):
            imported.update(a.name for a in node.names)
            imported.add(node.module or "")
    assert not imported & {"quasi_bell", "teleport_protocol", "quasibell.quasi_bell",
                           "quasibell.teleport_protocol"}


def test_gram_at_half_overlap():
    g = orc.oracle_gram(Labels(HALF, HALF))
    assert abs(g[0, 2] - 0.8) <= 1e-12
    assert abs(g[1, 3]) <= 1e-12
    assert np.allclose(np.diag(g), 1.0, atol=1e-12)


def test_vanishing_odd_states():
    g = orc.oracle_gram(Labels(0.0, 0.0))
    assert math.isnan(g[1, 3])
    with pytest.raises(InvalidArgumentError):
        orc.oracle_reduced(Labels(0.0, 0.0), 2)


def test_reduced_spectrum_both_modes():
    spec = Labels(0.5, 1.1)
    a = orc.oracle_reduced(spec, 1, keep=0)
    b = orc.oracle_reduced(spec, 1, keep=1)
    assert np.allclose(a.top_two, b.top_two, atol=1e-12)
    assert abs(np.trace(a.rho) - 1.0) <= 1e-12


def test_large_cutoff_path_matches_projector_path(monkeypatch):
    spec = Labels(0.6, 0.9)
    dense = orc.oracle_reduced(spec, 3)
    monkeypatch.setattr(orc, "DENSE_PROJECTOR_LIMIT", 0)
    for keep in (0, 1):
        fast = orc.oracle_reduced(spec, 3, keep=keep)
        assert np.allclose(fast.top_two, dense.top_two, atol=1e-13)


def test_truncation_is_reported():
    with pytest.raises(TruncationError):
        orc.oracle_gram(Labels(3.0, 3.0), orc.OracleConfig(cutoff=12))


def test_lowdin_pair_orthonormal():
    rng = np.random.default_rng(0)
    u = rng.normal(size=6) + 1j * rng.normal(size=6)
    v = u + 0.3 * (rng.normal(size=6) + 1j * rng.normal(size=6))
    e1, e2 = orc.lowdin_pair(u, v)
    basis = np.stack([e1, e2])
    assert np.allclose(basis.conj() @ basis.T, np.eye(2), atol=1e-13)
    with pytest.raises(BasisUndefinedError):
        orc.lowdin_pair(u, u)


def test_lowdin_basis_equals_mixing_angle_basis():
    spec = qb.make_channel(0.7, 0.7)
    config = orc.OracleConfig()
    n = config.cutoff_for(spec.alpha)
    a_p, a_m = fn.coherent_ket(spec.alpha, n).amps, fn.coherent_ket(-spec.alpha, n).amps
    e1, e2 = orc.lowdin_pair(a_p, a_m)
    fwd = tp.onb_coeffs(spec).forward_a
    assert np.allclose(e1, fwd[0, 0] * a_p + fwd[0, 1] * a_m, atol=1e-12)
    assert np.allclose(e2, fwd[1, 0] * a_p + fwd[1, 1] * a_m, atol=1e-12)


def test_mixing_angle():
    assert abs(orc.mixing_angle(HALF) - math.pi / 12) <= 1e-12


def test_teleport_run_at_half_overlap():
    spec = Labels(HALF, HALF)
    t = math.pi / 12
    run = orc.oracle_teleport(spec, (math.cos(t), math.sin(t)))
    assert np.allclose(run.probabilities, (0.35, 0.15, 0.35, 0.15), atol=1e-12)
    assert abs(run.fidelity - 0.85) <= 1e-12
    assert abs(run.concurrence - 0.6) <= 1e-12
    assert run.leakage <= 1e-12


def test_bell_projectors():
    assert orc.bell_projector_deviation(Labels(0.6, 1.0)) <= 1e-12


def test_unnormalized_qubit_rejected():
    with pytest.raises(InvalidArgumentError):
        orc.oracle_teleport(Labels(1.0, 1.0), (1.0, 1.0))


@pytest.mark.parametrize("a,b", [(0.3, 0.3), (0.6, 1.5), (1.0 + 0.5j, 0.4j)])
def test_cutoff_stability(a, b):
    spec = Labels(a, b)
    n = orc.OracleConfig().cutoff_for(a, b)
    g1 = orc.oracle_gram(spec)
    g2 = orc.oracle_gram(spec, orc.OracleConfig(cutoff=2 * n))
    assert np.nanmax(np.abs(g1 - g2)) <= 1e-12
