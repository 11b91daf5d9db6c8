"""Dense linear algebra on truncated bosonic Fock spaces.

Kets are :class:`TruncatedKet` values; density matrices are plain square
complex ``ndarray`` objects. Composite spaces are described by a layout, a
tuple of factor dimensions, with the composite index row-major over the
layout (leftmost factor varies slowest, the ``np.kron`` convention).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy.special import gammainc

from .errors import InvalidArgumentError, TruncationError

HERMITIAN_TOL = 1e-10
JACOBI_OFF_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


@dataclass(frozen=True)
class TruncatedKet:
    """Complex amplitude vector over Fock levels ``0 .. cutoff-1``.

    ``deficit`` is the probability weight lost to truncation (zero for
    vectors that are exact in the truncated space).
    """

    amps: np.ndarray
    deficit: float = 0.0

    def __post_init__(self):
        amps = np.array(self.amps, dtype=complex).ravel()
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @property
    def cutoff(self) -> int:
        return self.amps.shape[0]

    dim = cutoff

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def __len__(self):
        return self.cutoff


KetLike = Union[TruncatedKet, np.ndarray, Sequence[complex]]


def _amps(x: KetLike) -> np.ndarray:
    if isinstance(x, TruncatedKet):
        return x.amps
    arr = np.asarray(x, dtype=complex)
    if arr.ndim != 1:
        raise InvalidArgumentError(f"expected a 1-d amplitude vector, got shape {arr.shape}")
    return arr


def default_cutoff(*labels: complex) -> int:
    """Per-mode cutoff ``ceil(|l|^2 + 10|l| + 20)`` for the largest label."""
    lam = max((abs(complex(l)) for l in labels), default=0.0)
    return int(math.ceil(lam * lam + 10.0 * lam + 20.0))


def poisson_tail(alpha: complex, cutoff: int) -> float:
    """Weight of a coherent state on levels ``n >= cutoff``."""
    mean = abs(complex(alpha)) ** 2
    if mean == 0.0:
        return 0.0
    return float(gammainc(cutoff, mean))


def coherent_ket(alpha: complex, cutoff: int, tol: float | None = None) -> TruncatedKet:
    """Truncated coherent state with amplitudes ``exp(-|a|^2/2) a^n / sqrt(n!)``.

    If ``tol`` is given and the discarded weight exceeds it, a
    :class:`TruncationError` carrying the deficit is raised.
    """
    if int(cutoff) != cutoff or cutoff < 1:
        raise InvalidArgumentError(f"cutoff must be a positive integer, got {cutoff!r}")
    cutoff = int(cutoff)
    alpha = complex(alpha)
    amps = np.empty(cutoff, dtype=complex)
    amps[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, cutoff):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    deficit = poisson_tail(alpha, cutoff)
    if tol is not None and deficit > tol:
        raise TruncationError(deficit, tol, label=alpha)
    return TruncatedKet(amps, deficit)


def basis_ket(index: int, dim: int) -> TruncatedKet:
    if not 0 <= index < dim:
        raise InvalidArgumentError(f"index {index} outside 0..{dim - 1}")
    amps = np.zeros(dim, dtype=complex)
    amps[index] = 1.0
    return TruncatedKet(amps)


def inner(u: KetLike, v: KetLike) -> complex:
    """``<u|v>``, antilinear in the first argument."""
    a, b = _amps(u), _amps(v)
    if a.shape != b.shape:
        raise InvalidArgumentError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return complex(np.vdot(a, b))


def tensor(u, v):
    """Kronecker product of two kets or two density matrices."""
    if isinstance(u, TruncatedKet) or isinstance(v, TruncatedKet):
        a, b = _amps(u), _amps(v)
        du = u.deficit if isinstance(u, TruncatedKet) else 0.0
        dv = v.deficit if isinstance(v, TruncatedKet) else 0.0
        # weight kept is (1-du)(1-dv)
        return TruncatedKet(np.kron(a, b), du + dv - du * dv)
    a, b = np.asarray(u), np.asarray(v)
    if a.ndim != b.ndim or a.ndim not in (1, 2):
        raise InvalidArgumentError("tensor needs two kets or two square matrices")
    return np.kron(a, b)


def tensor_all(*factors):
    out = factors[0]
    for f in factors[1:]:
        out = tensor(out, f)
    return out


def ket_to_dm(psi: KetLike) -> np.ndarray:
    a = _amps(psi)
    return np.outer(a, a.conj())


def check_layout(layout: Sequence[int], dim: int) -> tuple:
    layout = tuple(int(d) for d in layout)
    if not layout or any(d < 1 for d in layout):
        raise InvalidArgumentError(f"invalid layout {layout}")
    if math.prod(layout) != dim:
        raise InvalidArgumentError(f"layout {layout} has product {math.prod(layout)}, expected {dim}")
    return layout


def partial_trace(rho: np.ndarray, layout: Sequence[int], keep: int) -> np.ndarray:
    """Trace out every factor of ``layout`` except ``keep``."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidArgumentError(f"density matrix must be square, got shape {rho.shape}")
    layout = check_layout(layout, rho.shape[0])
    n = len(layout)
    if not 0 <= keep < n:
        raise InvalidArgumentError(f"keep={keep} outside 0..{n - 1}")
    letters = "abcdefghijklmnopqrstuvwxyz"
    rows = list(letters[:n])
    cols = list(letters[n:2 * n])
    for j in range(n):
        if j != keep:
            cols[j] = rows[j]
    spec = "".join(rows) + "".join(cols) + "->" + rows[keep] + cols[keep]
    return np.einsum(spec, rho.reshape(layout + layout))


def check_density_matrix(rho: np.ndarray, normalized: bool = True,
                         herm_tol: float = 1e-12, trace_tol: float = 1e-10,
                         psd_tol: float = 1e-10) -> None:
    """Raise :class:`InvalidArgumentError` if ``rho`` is not a valid state."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidArgumentError(f"density matrix must be square, got shape {rho.shape}")
    dev = float(np.max(np.abs(rho - rho.conj().T))) if rho.size else 0.0
    if dev > herm_tol:
        raise InvalidArgumentError(f"not Hermitian (max deviation {dev:.3e})")
    if normalized and abs(np.trace(rho) - 1.0) > trace_tol:
        raise InvalidArgumentError(f"trace {np.trace(rho).real:.15f} != 1")
    w, _ = hermitian_eigs(rho)
    if w[0] < -psd_tol:
        raise InvalidArgumentError(f"negative eigenvalue {w[0]:.3e}")


def hermitian_eigs(m: np.ndarray, tol: float = HERMITIAN_TOL):
    """Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi.

    Returns ``(w, v)`` with ``w`` ascending and the columns of ``v``
    orthonormal eigenvectors, so that ``m ~= v @ diag(w) @ v.conj().T``.
    """
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidArgumentError(f"matrix must be square, got shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=complex)
    dev = float(np.max(np.abs(a - a.conj().T)))
    if dev > tol:
        raise InvalidArgumentError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))
    skip = 1e-18 * scale

    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off < JACOBI_OFF_TOL * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r < skip:
                    continue
                ph = (apq / r).conjugate()
                t = 0.5 * math.atan2(2.0 * r, a[p, p].real - a[q, q].real)
                c, s = math.cos(t), math.sin(t)
                # U = diag(1, e^{-i phi}) @ [[c, -s], [s, c]]
                u00, u01, u10, u11 = c, -s, s * ph, c * ph

                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = cp * u00 + cq * u10
                a[:, q] = cp * u01 + cq * u11
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = rp * u00 + rq * u10.conjugate()
                a[q, :] = rp * u01 + rq * u11.conjugate()
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real

                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = vp * u00 + vq * u10
                v[:, q] = vp * u01 + vq * u11
    else:
        raise RuntimeError(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")

    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def shannon_entropy_bits(probs) -> float:
    """``-sum p log2 p`` with ``0 log 0 = 0``; tiny negative round-off is clipped."""
    total = 0.0
    for p in probs:
        p = float(p)
        if p > 0.0:
            total -= p * math.log2(p)
    return total
