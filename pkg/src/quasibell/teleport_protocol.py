"""Teleporting a qubit through the ``|Psi_3>`` quasi-Bell channel.

Each mode is rewritten in the orthonormal pair built from ``{|a>, |-a>}``:

    |e1> = (cos t |a> - sin t |-a>) / cos 2t
    |e2> = (-sin t |a> + cos t |-a>) / cos 2t

with ``sin 2t = <a|-a>`` (and ``|f1>, |f2>`` likewise for mode B with ``t'``).
The sender holds qubit ``a`` (logical basis identified with ``e1, e2``) and
mode ``e``; the receiver holds mode ``f``. Outcomes are ordered
``Phi+, Phi-, Psi+, Psi-`` everywhere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .errors import BasisUndefinedError, InvalidArgumentError
from .quasi_bell import ChannelSpec, concurrence_channel

LABELS = ("Phi+", "Phi-", "Psi+", "Psi-")
BASIS_MARGIN = 1e-8

# Receiver corrections, keyed by outcome.
CORRECTIONS = {
    "Phi+": np.array([[1, 0], [0, 1]], dtype=complex),
    "Phi-": np.array([[1, 0], [0, -1]], dtype=complex),   # sigma_z
    "Psi+": np.array([[0, 1], [1, 0]], dtype=complex),    # sigma_x
    "Psi-": np.array([[0, 1], [-1, 0]], dtype=complex),   # i sigma_y
}


@dataclass(frozen=True)
class OnbCoeffs:
    """Change-of-basis matrices for both modes.

    ``forward`` maps the coherent pair to the orthonormal pair
    (row k holds the coefficients of ``|e_k>`` on ``|a>, |-a>``);
    ``inverse`` expresses ``|a>, |-a>`` on ``|e1>, |e2>``.
    """

    forward_a: np.ndarray
    inverse_a: np.ndarray
    forward_b: np.ndarray
    inverse_b: np.ndarray


def _pair(theta: float) -> Tuple[np.ndarray, np.ndarray]:
    c, s = math.cos(theta), math.sin(theta)
    c2 = math.cos(2.0 * theta)
    forward = np.array([[c, -s], [-s, c]]) / c2
    inverse = np.array([[c, s], [s, c]])
    return forward, inverse


def is_formal_limit(spec: ChannelSpec) -> bool:
    """True where the orthonormal pair of either mode does not exist."""
    edge = math.pi / 4 - BASIS_MARGIN
    return not (spec.theta_mix < edge and spec.theta_prime_mix < edge)


def _require_basis(spec: ChannelSpec) -> None:
    if is_formal_limit(spec):
        raise BasisUndefinedError(
            f"orthonormal basis undefined: |alpha|={spec.abs_alpha:.3g}, |beta|={spec.abs_beta:.3g} "
            "(a zero label makes the coherent pair linearly dependent)"
        )


def onb_coeffs(spec: ChannelSpec) -> OnbCoeffs:
    _require_basis(spec)
    fa, ia = _pair(spec.theta_mix)
    fb, ib = _pair(spec.theta_prime_mix)
    return OnbCoeffs(fa, ia, fb, ib)


def _channel_norm(spec: ChannelSpec) -> float:
    return math.sqrt(2.0 * (1.0 + spec.s * spec.s_prime))


def channel_in_onb(spec: ChannelSpec, formal: bool = False) -> Tuple[float, float, float, float]:
    """``(c11, c12, c21, c22)``, the amplitudes of ``|Psi_3>`` on ``|e_i>|f_j>``."""
    if not formal:
        _require_basis(spec)
    t, tp = spec.theta_mix, spec.theta_prime_mix
    n = _channel_norm(spec)
    diag = math.cos(t - tp) / n
    off = math.sin(t + tp) / n
    return diag, off, off, diag


def pure_concurrence(c11: complex, c12: complex, c21: complex, c22: complex) -> float:
    return 2.0 * abs(c11 * c22 - c12 * c21)


@dataclass(frozen=True)
class InputQubit:
    a1: complex
    a2: complex

    def __post_init__(self):
        a1, a2 = complex(self.a1), complex(self.a2)
        if abs(abs(a1) ** 2 + abs(a2) ** 2 - 1.0) > 1e-12:
            raise InvalidArgumentError(f"input qubit not normalized: |a1|^2 + |a2|^2 = {abs(a1)**2 + abs(a2)**2}")
        object.__setattr__(self, "a1", a1)
        object.__setattr__(self, "a2", a2)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.a1, self.a2])


def canonical_input(spec: ChannelSpec) -> InputQubit:
    """The input ``cos t |e1> + sin t |e2>`` tied to the mode-A angle."""
    t = spec.theta_mix
    return InputQubit(math.cos(t), math.sin(t))


@dataclass(frozen=True)
class MeasurementOutcome:
    label: str
    probability: float
    bella_state_raw: np.ndarray
    bella_state_corrected: np.ndarray


def measurement_probabilities(spec: ChannelSpec, formal: bool = False) -> Tuple[float, float, float, float]:
    """``(P1, P2, P3, P4)`` for the canonical input; ``P1 = P3``, ``P2 = P4``."""
    if not formal:
        _require_basis(spec)
    s, sp = spec.s, spec.s_prime
    bias = 0.25 * (s * s + s * sp) / (1.0 + s * sp)
    return 0.25 + bias, 0.25 - bias, 0.25 + bias, 0.25 - bias


def conditional_states(spec: ChannelSpec, qubit: Optional[InputQubit] = None) -> List[MeasurementOutcome]:
    """Receiver's state for each outcome, before and after correction.

    The raw vectors carry the amplitude of the branch, so their squared norm
    is the outcome probability.
    """
    _require_basis(spec)
    qubit = qubit or canonical_input(spec)
    a1, a2 = qubit.a1, qubit.a2
    c11, c12, c21, c22 = channel_in_onb(spec)
    r = 1.0 / math.sqrt(2.0)
    raws = {
        "Phi+": r * np.array([a1 * c11 + a2 * c21, a1 * c12 + a2 * c22]),
        "Phi-": r * np.array([a1 * c11 - a2 * c21, a1 * c12 - a2 * c22]),
        "Psi+": r * np.array([a1 * c21 + a2 * c11, a1 * c22 + a2 * c12]),
        "Psi-": r * np.array([a1 * c21 - a2 * c11, a1 * c22 - a2 * c12]),
    }
    out = []
    for label in LABELS:
        raw = raws[label]
        prob = float(np.vdot(raw, raw).real)
        fixed = CORRECTIONS[label] @ raw
        nrm = np.linalg.norm(fixed)
        fixed = fixed / nrm if nrm > 0 else fixed
        out.append(MeasurementOutcome(label, prob, raw, fixed))
    return out


def fidelity_from_outcomes(outcomes: List[MeasurementOutcome], qubit: InputQubit) -> float:
    """``sum_i P_i |<psi|chi_i>|^2``."""
    psi = qubit.vector
    return float(sum(o.probability * abs(np.vdot(psi, o.bella_state_corrected)) ** 2 for o in outcomes))


def fidelity(spec: ChannelSpec) -> float:
    """Closed-form fidelity for the canonical input; defined at the formal endpoint too."""
    t, tp = spec.theta_mix, spec.theta_prime_mix
    s, sp = spec.s, spec.s_prime
    return (math.cos(t - tp) ** 2 + s * s * math.sin(t + tp) ** 2) / (1.0 + s * sp)


def fidelity_equal_angles(theta: float) -> float:
    x = math.sin(2.0 * theta) ** 2
    return (1.0 + x * x) / (1.0 + x)


def masfi(spec: ChannelSpec) -> float:
    """Minimum assured fidelity ``2C / (1 + C)``."""
    c = concurrence_channel(spec)
    return 2.0 * c / (1.0 + c)


def masfi_equal_angles(theta: float) -> float:
    return math.cos(2.0 * theta) ** 2


def _outcome_probabilities(spec: ChannelSpec, qubit: InputQubit) -> np.ndarray:
    probs = np.array([o.probability for o in conditional_states(spec, qubit)])
    return probs / probs.sum()


def _draw(cdf: np.ndarray, u) -> np.ndarray:
    idx = np.searchsorted(cdf, u, side="right")
    return np.minimum(idx, len(LABELS) - 1)


def teleport_once(spec: ChannelSpec, qubit: Optional[InputQubit], seed: int) -> Tuple[str, np.ndarray]:
    """Sample one measurement outcome and return it with the corrected state."""
    qubit = qubit or canonical_input(spec)
    outcomes = conditional_states(spec, qubit)
    probs = np.array([o.probability for o in outcomes])
    cdf = np.cumsum(probs / probs.sum())
    u = np.random.default_rng(seed).random()
    k = int(_draw(cdf, u))
    return outcomes[k].label, outcomes[k].bella_state_corrected


def sample_outcomes(spec: ChannelSpec, shots: int, seed: int,
                    qubit: Optional[InputQubit] = None) -> np.ndarray:
    """Outcome indices (into :data:`LABELS`) for ``shots`` independent runs."""
    if shots < 1:
        raise InvalidArgumentError(f"shots must be positive, got {shots}")
    qubit = qubit or canonical_input(spec)
    cdf = np.cumsum(_outcome_probabilities(spec, qubit))
    return _draw(cdf, np.random.default_rng(seed).random(shots))


@dataclass(frozen=True)
class TeleportReport:
    spec: ChannelSpec
    probabilities: Tuple[float, float, float, float]
    fidelity: float
    concurrence: float
    masfi: float
    formal_limit: bool = False
    outcomes: List[MeasurementOutcome] = field(default_factory=list)


def teleport_report(spec: ChannelSpec, allow_formal: bool = False) -> TeleportReport:
    formal = is_formal_limit(spec)
    if formal and not allow_formal:
        _require_basis(spec)
    outcomes = [] if formal else conditional_states(spec)
    return TeleportReport(
        spec=spec,
        probabilities=measurement_probabilities(spec, formal=formal),
        fidelity=fidelity(spec),
        concurrence=concurrence_channel(spec),
        masfi=masfi(spec),
        formal_limit=formal,
        outcomes=outcomes,
    )
