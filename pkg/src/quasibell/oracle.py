"""Brute-force recomputation of every closed form from explicit Fock-space kets.

Nothing here imports :mod:`quasibell.quasi_bell` or
:mod:`quasibell.teleport_protocol`; only :mod:`quasibell.fock_numerics`
primitives are used. Channel labels are passed as plain complex numbers (any
object with ``alpha`` and ``beta`` attributes also works). The orthonormal
mode bases are obtained by symmetric (Lowdin) orthogonalization of the
numerically computed Gram matrix of ``{|a>, |-a>}``; no mixing angles are
involved.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import fock_numerics as fn
from .errors import BasisUndefinedError, InvalidArgumentError

DEFICIT_TOL = 1e-13
# Above this many complex entries the reduced state is formed as M M^+ from the
# reshaped ket instead of tracing the full projector.
DENSE_PROJECTOR_LIMIT = 4_000_000

LABELS = ("Phi+", "Phi-", "Psi+", "Psi-")
_SIGNS = {1: (-1, 1), 2: (-1, -1), 3: (1, 1), 4: (1, -1)}
_CORRECTIONS = {
    "Phi+": np.eye(2, dtype=complex),
    "Phi-": np.diag([1.0, -1.0]).astype(complex),
    "Psi+": np.array([[0, 1], [1, 0]], dtype=complex),
    "Psi-": np.array([[0, 1], [-1, 0]], dtype=complex),
}


@dataclass(frozen=True)
class OracleConfig:
    cutoff: Optional[int] = None
    tolerance: float = 1e-10
    deficit_tol: float = DEFICIT_TOL

    def cutoff_for(self, *labels: complex) -> int:
        return self.cutoff or fn.default_cutoff(*labels)

    def layout(self, *labels: complex) -> Tuple[int, int, int]:
        n = self.cutoff_for(*labels)
        return (2, n, n)


def _labels(spec) -> Tuple[complex, complex]:
    return complex(spec.alpha), complex(spec.beta)


def _kets(spec, config: OracleConfig):
    alpha, beta = _labels(spec)
    n = config.cutoff_for(alpha, beta)
    tol = config.deficit_tol
    return (fn.coherent_ket(alpha, n, tol), fn.coherent_ket(-alpha, n, tol),
            fn.coherent_ket(beta, n, tol), fn.coherent_ket(-beta, n, tol))


def _raw_state(i: int, kets) -> np.ndarray:
    a_p, a_m, b_p, b_m = (k.amps for k in kets)
    sign, rel = _SIGNS[i]
    b1, b2 = (b_p, b_m) if sign > 0 else (b_m, b_p)
    return np.kron(a_p, b1) + rel * np.kron(a_m, b2)


def explicit_states(spec, config: OracleConfig = OracleConfig()) -> List[Optional[np.ndarray]]:
    """The four normalized two-mode kets; ``None`` where the state vanishes."""
    kets = _kets(spec, config)
    out = []
    for i in (1, 2, 3, 4):
        v = _raw_state(i, kets)
        nrm = np.linalg.norm(v)
        out.append(None if nrm < 1e-6 else v / nrm)
    return out


def oracle_gram(spec, config: OracleConfig = OracleConfig()) -> np.ndarray:
    states = explicit_states(spec, config)
    g = np.full((4, 4), math.nan)
    for i, u in enumerate(states):
        for j, v in enumerate(states):
            if u is not None and v is not None:
                g[i, j] = abs(fn.inner(u, v))
    return g


@dataclass(frozen=True)
class OracleReduced:
    rho: np.ndarray
    eigenvalues: np.ndarray      # full spectrum, ascending
    entropy_bits: float

    @property
    def top_two(self) -> Tuple[float, float]:
        return float(self.eigenvalues[-2]), float(self.eigenvalues[-1])

    def significant(self, threshold: float = 1e-10) -> np.ndarray:
        return self.eigenvalues[self.eigenvalues > threshold]


def oracle_reduced(spec, i: int, config: OracleConfig = OracleConfig(), keep: int = 0) -> OracleReduced:
    """Reduced state of ``|Psi_i>`` on mode A (``keep=0``) or mode B (``keep=1``)."""
    if i not in _SIGNS:
        raise InvalidArgumentError(f"quasi-Bell index must be 1..4, got {i!r}")
    psi = explicit_states(spec, config)[i - 1]
    if psi is None:
        raise InvalidArgumentError(f"|Psi_{i}> vanishes for this channel")
    n = int(round(math.sqrt(psi.shape[0])))
    if psi.shape[0] ** 2 <= DENSE_PROJECTOR_LIMIT:
        rho = fn.partial_trace(fn.ket_to_dm(psi), (n, n), keep)
    else:
        m = psi.reshape(n, n)
        rho = m @ m.conj().T if keep == 0 else (m.T @ m.conj())
    w, _ = fn.hermitian_eigs(rho)
    return OracleReduced(rho, w, fn.shannon_entropy_bits(w))


def lowdin_pair(u: np.ndarray, v: np.ndarray, min_eig: float = 1e-12) -> Tuple[np.ndarray, np.ndarray]:
    """Symmetric orthonormalization of two kets; returns ``(e1, e2)``."""
    vecs = np.stack([u, v], axis=1)
    gram = vecs.conj().T @ vecs
    w, q = fn.hermitian_eigs(gram)
    if w[0] < min_eig:
        raise BasisUndefinedError(f"coherent pair is (numerically) linearly dependent: Gram eigenvalue {w[0]:.3e}")
    inv_sqrt = q @ np.diag(w ** -0.5) @ q.conj().T
    e = vecs @ inv_sqrt
    return e[:, 0], e[:, 1]


@dataclass(frozen=True)
class OracleTeleport:
    probabilities: Tuple[float, float, float, float]
    raw_states: Tuple[np.ndarray, ...]        # receiver coordinates on (f1, f2), unnormalized
    corrected_states: Tuple[np.ndarray, ...]  # normalized, after correction
    fidelity: float
    channel_coeffs: np.ndarray                # 2x2, <e_i f_j | Psi_3>
    leakage: float                            # largest receiver-state weight outside span{f1, f2}
    bell_vectors: np.ndarray                  # 4 x 2N, rows Phi+, Phi-, Psi+, Psi-

    @property
    def concurrence(self) -> float:
        c = self.channel_coeffs
        return 2.0 * abs(c[0, 0] * c[1, 1] - c[0, 1] * c[1, 0])


def oracle_teleport(spec, qubit: Sequence[complex], config: OracleConfig = OracleConfig()) -> OracleTeleport:
    """Run the protocol on ``[2, N, N]`` with explicit kets and projectors.

    ``qubit`` is the pair of amplitudes on the logical basis of qubit ``a``.
    """
    psi_a = np.asarray([complex(qubit[0]), complex(qubit[1])])
    if abs(np.vdot(psi_a, psi_a).real - 1.0) > 1e-12:
        raise InvalidArgumentError("input qubit is not normalized")
    a_p, a_m, b_p, b_m = (k.amps for k in _kets(spec, config))
    n = a_p.shape[0]
    e1, e2 = lowdin_pair(a_p, a_m)
    f1, f2 = lowdin_pair(b_p, b_m)

    channel = np.kron(a_p, b_p) + np.kron(a_m, b_m)
    channel /= np.linalg.norm(channel)
    coeffs = np.array([[fn.inner(np.kron(ei, fj), channel) for fj in (f1, f2)] for ei in (e1, e2)])

    total = np.kron(psi_a, channel).reshape(2 * n, n)     # (a, e) rows, f columns
    q0, q1 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    r = 1.0 / math.sqrt(2.0)
    bell = np.array([
        r * (np.kron(q0, e1) + np.kron(q1, e2)),
        r * (np.kron(q0, e1) - np.kron(q1, e2)),
        r * (np.kron(q0, e2) + np.kron(q1, e1)),
        r * (np.kron(q0, e2) - np.kron(q1, e1)),
    ])

    probs, raws, fixed = [], [], []
    leakage = 0.0
    fid = 0.0
    for label, b in zip(LABELS, bell):
        branch = b.conj() @ total                  # receiver's unnormalized Fock-space ket
        p = float(np.vdot(branch, branch).real)
        coords = np.array([fn.inner(f1, branch), fn.inner(f2, branch)])
        rest = branch - coords[0] * f1 - coords[1] * f2
        leakage = max(leakage, float(np.linalg.norm(rest)))
        chi = _CORRECTIONS[label] @ coords
        nrm = np.linalg.norm(chi)
        chi = chi / nrm if nrm > 0 else chi
        fid += p * abs(np.vdot(psi_a, chi)) ** 2
        probs.append(p)
        raws.append(coords)
        fixed.append(chi)
    return OracleTeleport(tuple(probs), tuple(raws), tuple(fixed), float(fid), coeffs, leakage, bell)


def bell_projector_deviation(spec, config: OracleConfig = OracleConfig()) -> float:
    """Max deviation of the four (a, e) projectors from orthogonality and completeness.

    Completeness is checked against ``I_a (x) (|e1><e1| + |e2><e2|)``.
    """
    alpha, beta = _labels(spec)
    n = config.cutoff_for(alpha, beta)
    a_p = fn.coherent_ket(alpha, n, config.deficit_tol).amps
    a_m = fn.coherent_ket(-alpha, n, config.deficit_tol).amps
    e1, e2 = lowdin_pair(a_p, a_m)
    bell = oracle_teleport(spec, (1.0, 0.0), config).bell_vectors
    gram_dev = float(np.max(np.abs(bell.conj() @ bell.T - np.eye(4))))
    proj_sum = sum(np.outer(b, b.conj()) for b in bell)
    p_e = np.outer(e1, e1.conj()) + np.outer(e2, e2.conj())
    target = np.kron(np.eye(2), p_e)
    return max(gram_dev, float(np.max(np.abs(proj_sum - target))))


def mixing_angle(label: complex, config: OracleConfig = OracleConfig()) -> float:
    """Angle from the numerically evaluated overlap ``<a|-a>``."""
    n = config.cutoff_for(label)
    ov = fn.inner(fn.coherent_ket(label, n, config.deficit_tol), fn.coherent_ket(-label, n, config.deficit_tol))
    return 0.5 * math.asin(min(1.0, ov.real))
