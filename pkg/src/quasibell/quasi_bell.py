"""Quasi-Bell entangled coherent states and their entanglement measures.

The four states on mode A (label ``alpha``) and mode B (label ``beta``) are

    |Psi_1> ~ |a>|-b> + |-a>|b>      |Psi_2> ~ |a>|-b> - |-a>|b>
    |Psi_3> ~ |a>|b>  + |-a>|-b>     |Psi_4> ~ |a>|b>  - |-a>|-b>

Everything closed-form here depends on the labels only through the overlaps
``s = <a|-a> = exp(-2|a|^2)`` and ``s' = exp(-2|b|^2)``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import fock_numerics as fn
from .errors import DegenerateStateError, InvalidArgumentError

DEGENERATE_TOL = 1e-12
INDICES = (1, 2, 3, 4)


@dataclass(frozen=True)
class ChannelSpec:
    """Coherent labels of the two modes plus the derived overlaps and mixing angles.

    ``theta_mix`` solves ``sin(2 theta) = s`` on ``(0, pi/4]``; it is unrelated
    to the noncommutative parameter of :mod:`quasibell.landau_model`.
    """

    alpha: complex
    beta: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))

    @property
    def abs_alpha(self) -> float:
        return abs(self.alpha)

    @property
    def abs_beta(self) -> float:
        return abs(self.beta)

    @property
    def s(self) -> float:
        return math.exp(-2.0 * self.abs_alpha**2)

    @property
    def s_prime(self) -> float:
        return math.exp(-2.0 * self.abs_beta**2)

    @property
    def one_minus_s(self) -> float:
        return -math.expm1(-2.0 * self.abs_alpha**2)

    @property
    def one_minus_s_prime(self) -> float:
        return -math.expm1(-2.0 * self.abs_beta**2)

    @property
    def theta_mix(self) -> float:
        return 0.5 * math.asin(self.s)

    @property
    def theta_prime_mix(self) -> float:
        return 0.5 * math.asin(self.s_prime)

    @property
    def cos2theta(self) -> float:
        # sqrt((1-s)(1+s)) keeps precision when s is close to 1
        return math.sqrt(self.one_minus_s * (1.0 + self.s))

    @property
    def cos2theta_prime(self) -> float:
        return math.sqrt(self.one_minus_s_prime * (1.0 + self.s_prime))

    @property
    def odd_degenerate(self) -> bool:
        return self.abs_alpha**2 + self.abs_beta**2 < DEGENERATE_TOL

    def rotated(self, phi_a: float, phi_b: float) -> "ChannelSpec":
        return ChannelSpec(self.alpha * cmath.exp(1j * phi_a), self.beta * cmath.exp(1j * phi_b))


def make_channel(alpha: complex, beta: complex) -> ChannelSpec:
    return ChannelSpec(alpha, beta)


def label_for_angle(theta: float) -> float:
    """Real label ``|a|`` whose overlap gives mixing angle ``theta``."""
    if not 0.0 < theta <= math.pi / 4 + 1e-15:
        raise InvalidArgumentError(f"mixing angle must lie in (0, pi/4], got {theta}")
    s = min(1.0, math.sin(2.0 * theta))
    return math.sqrt(max(0.0, -0.5 * math.log(s)))


def channel_from_angles(theta: float, theta_prime: float) -> ChannelSpec:
    return ChannelSpec(label_for_angle(theta), label_for_angle(theta_prime))


def _check_index(i: int) -> None:
    if i not in INDICES:
        raise InvalidArgumentError(f"quasi-Bell index must be 1..4, got {i!r}")


def _is_odd(i: int) -> bool:
    return i in (2, 4)


def _require_nondegenerate(i: int, spec: ChannelSpec) -> None:
    if _is_odd(i) and spec.odd_degenerate:
        raise DegenerateStateError(
            f"|Psi_{i}> is the zero vector at alpha = beta = 0 (normalization 1/sqrt(2(1 - s s')) diverges)"
        )


def norm_const(i: int, spec: ChannelSpec) -> float:
    _check_index(i)
    _require_nondegenerate(i, spec)
    ss = spec.s * spec.s_prime
    if _is_odd(i):
        # 1 - s s' = -expm1(-2(|a|^2 + |b|^2))
        return 1.0 / math.sqrt(-2.0 * math.expm1(-2.0 * (spec.abs_alpha**2 + spec.abs_beta**2)))
    return 1.0 / math.sqrt(2.0 * (1.0 + ss))


@dataclass(frozen=True)
class QuasiBellState:
    index: int
    spec: ChannelSpec
    norm_const: float
    ket: fn.TruncatedKet

    @property
    def layout(self) -> Tuple[int, int]:
        n = int(round(math.sqrt(self.ket.cutoff)))
        return (n, n)


def branch_signs(i: int) -> Tuple[int, int]:
    """``(sign on beta in the first term, relative sign of the second term)``.

    State ``i`` is ``|a>|b1> + rel * |-a>|-b1>`` with ``b1 = sign * beta``.
    """
    _check_index(i)
    return {1: (-1, 1), 2: (-1, -1), 3: (1, 1), 4: (1, -1)}[i]


def quasi_bell_state(i: int, spec: ChannelSpec, cutoff: Optional[int] = None,
                     tol: Optional[float] = None) -> QuasiBellState:
    """Two-mode truncated ket of ``|Psi_i>`` on layout ``(N, N)``."""
    c = norm_const(i, spec)
    n = cutoff or fn.default_cutoff(spec.alpha, spec.beta)
    sign, rel = branch_signs(i)
    a_p = fn.coherent_ket(spec.alpha, n, tol)
    a_m = fn.coherent_ket(-spec.alpha, n, tol)
    b_1 = fn.coherent_ket(sign * spec.beta, n, tol)
    b_2 = fn.coherent_ket(-sign * spec.beta, n, tol)
    amps = c * (np.kron(a_p.amps, b_1.amps) + rel * np.kron(a_m.amps, b_2.amps))
    deficit = max(a_p.deficit, b_1.deficit)
    return QuasiBellState(i, spec, c, fn.TruncatedKet(amps, deficit))


def gram_matrix(spec: ChannelSpec) -> np.ndarray:
    """Absolute overlaps ``|<Psi_i|Psi_j>|``; the (2,4) entry is NaN when undefined."""
    s, sp = spec.s, spec.s_prime
    g = np.eye(4)
    g13 = (s + sp) / (1.0 + s * sp)
    g[0, 2] = g[2, 0] = g13
    if spec.odd_degenerate:
        g[1, 3] = g[3, 1] = math.nan
    else:
        one_minus_ss = -math.expm1(-2.0 * (spec.abs_alpha**2 + spec.abs_beta**2))
        g[1, 3] = g[3, 1] = abs(s - sp) / one_minus_ss
    return g


def reduced_eigs(i: int, spec: ChannelSpec) -> Tuple[float, float]:
    """Nonzero eigenvalues ``(lam, lam')`` of the reduced state of ``|Psi_i>``.

    Even states: ``(1 -+ s)(1 -+ s') / (2 (1 + s s'))``;
    odd states:  ``(1 -+ s)(1 +- s') / (2 (1 - s s'))``.
    ``lam`` belongs to the odd-parity component of mode A.
    """
    _check_index(i)
    _require_nondegenerate(i, spec)
    s, sp = spec.s, spec.s_prime
    ms, msp = spec.one_minus_s, spec.one_minus_s_prime
    if _is_odd(i):
        denom = -2.0 * math.expm1(-2.0 * (spec.abs_alpha**2 + spec.abs_beta**2))
        return ms * (1.0 + sp) / denom, (1.0 + s) * msp / denom
    denom = 2.0 * (1.0 + s * sp)
    return ms * msp / denom, (1.0 + s) * (1.0 + sp) / denom


def squared_form_eigs(i: int, spec: ChannelSpec) -> Tuple[float, float]:
    """The squared-overlap form ``(1 -+ s')^2 / (2 (1 +- s s'))``.

    Kept for comparison only: it sums to one (and agrees with
    :func:`reduced_eigs`) just for even states with ``|alpha| = |beta|``.
    """
    _check_index(i)
    _require_nondegenerate(i, spec)
    s, sp = spec.s, spec.s_prime
    denom = 2.0 * (1.0 - s * sp) if _is_odd(i) else 2.0 * (1.0 + s * sp)
    return (1.0 - sp) ** 2 / denom, (1.0 + sp) ** 2 / denom


def entanglement_entropy(i: int, spec: ChannelSpec) -> float:
    """Entropy of entanglement in bits."""
    return fn.shannon_entropy_bits(reduced_eigs(i, spec))


def concurrence_channel(spec: ChannelSpec) -> float:
    """``cos 2t cos 2t' / (1 + sin 2t sin 2t')`` for the ``|Psi_3>`` channel."""
    return spec.cos2theta * spec.cos2theta_prime / (1.0 + spec.s * spec.s_prime)


@dataclass(frozen=True)
class EntanglementReport:
    index: int
    eigen_pair: Tuple[float, float]
    entropy_bits: float
    concurrence: float


def entanglement_report(i: int, spec: ChannelSpec) -> EntanglementReport:
    lam = reduced_eigs(i, spec)
    # pure two-mode state with Schmidt coefficients sqrt(lam): C = 2 sqrt(lam lam')
    conc = 2.0 * math.sqrt(max(0.0, lam[0]) * max(0.0, lam[1]))
    return EntanglementReport(i, lam, fn.shannon_entropy_bits(lam), conc)
