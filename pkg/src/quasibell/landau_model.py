"""Exotic Landau problem: a charged particle on the noncommutative plane.

Phase space is ``(x1, x2, p1, p2)`` with the deformed brackets

    {x_i, x_j} = (M/M*) theta eps_ij,  {x_i, p_j} = (M/M*) delta_ij,
    {p_i, p_j} = (M/M*) e B eps_ij,

where ``M* = M (1 - e theta B)`` and ``eps_12 = +1``. Natural units
(``hbar = M = e = 1``) are the defaults; nothing here depends on a unit
system as long as inputs are consistent.

``R(phi)`` is the counter-clockwise rotation ``[[cos, -sin], [sin, cos]]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from .errors import CriticalCaseError, InvalidArgumentError, UnsupportedError

CRITICAL_TOL = 1e-12
MAX_STEPS = 10**8

EPS = np.array([[0.0, 1.0], [-1.0, 0.0]])


def rotation(phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class LandauParams:
    M: float = 1.0
    charge_e: float = 1.0
    B: float = 1.0
    theta_nc: float = 0.0
    hbar: float = 1.0
    E_field: Tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not self.M > 0:
            raise InvalidArgumentError(f"mass must be positive, got {self.M}")
        if not self.hbar > 0:
            raise InvalidArgumentError(f"hbar must be positive, got {self.hbar}")
        object.__setattr__(self, "E_field", tuple(float(c) for c in self.E_field))

    @classmethod
    def from_kappa(cls, kappa: float, M: float = 1.0, **kw) -> "LandauParams":
        """Build from the exotic parameter, ``theta = kappa / M**2``."""
        return cls(M=M, theta_nc=kappa / M**2, **kw)

    @property
    def kappa(self) -> float:
        return self.theta_nc * self.M**2

    @property
    def coupling(self) -> float:
        """The dimensionless product ``e theta B``."""
        return self.charge_e * self.theta_nc * self.B

    @property
    def has_field(self) -> bool:
        return any(c != 0.0 for c in self.E_field)


@dataclass(frozen=True)
class ClassicalState:
    x1: float
    x2: float
    p1: float
    p2: float
    t: float = 0.0

    @property
    def x(self) -> np.ndarray:
        return np.array([self.x1, self.x2])

    @property
    def p(self) -> np.ndarray:
        return np.array([self.p1, self.p2])

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.p1, self.p2])

    @classmethod
    def from_array(cls, y, t: float = 0.0) -> "ClassicalState":
        return cls(float(y[0]), float(y[1]), float(y[2]), float(y[3]), float(t))


@dataclass(frozen=True)
class CyclotronSolution:
    """``x(t) = R(-omega_star t) alpha_vec + beta_vec``."""

    alpha_vec: Tuple[float, float]
    beta_vec: Tuple[float, float]
    omega_star: float
    M_star: float

    def position(self, t: float) -> np.ndarray:
        return rotation(-self.omega_star * t) @ np.asarray(self.alpha_vec) + np.asarray(self.beta_vec)

    def velocity(self, t: float) -> np.ndarray:
        w = self.omega_star
        return w * EPS @ rotation(-w * t) @ np.asarray(self.alpha_vec)

    def state(self, t: float) -> ClassicalState:
        x = self.position(t)
        p = self.M_star * self.velocity(t)
        return ClassicalState(x[0], x[1], p[0], p[1], t)

    @property
    def radius(self) -> float:
        return float(np.hypot(*self.alpha_vec))


def _check_noncritical(p: LandauParams) -> float:
    one_minus = 1.0 - p.coupling
    if abs(one_minus) <= CRITICAL_TOL:
        raise CriticalCaseError(
            f"critical case e*theta*B = 1 (e={p.charge_e}, theta={p.theta_nc}, B={p.B}): M* vanishes"
        )
    return one_minus


def effective_params(p: LandauParams) -> Tuple[float, float, float]:
    """Return ``(M_star, omega, omega_star)``."""
    one_minus = _check_noncritical(p)
    M_star = p.M * one_minus
    omega = p.charge_e * p.B / p.M
    omega_star = omega / one_minus
    return M_star, omega, omega_star


def energy_level(n: int, p: LandauParams) -> float:
    if n < 0 or int(n) != n:
        raise InvalidArgumentError(f"level index must be a non-negative integer, got {n!r}")
    _, _, omega_star = effective_params(p)
    return p.hbar * omega_star * (n + 0.5)


def ladder_spacing(p: LandauParams) -> float:
    """Level spacing assembled from the ladder commutator and Hamiltonian prefactor.

    ``[a, a+] = 2 hbar (1 - eB theta) M omega`` and
    ``H = a+ a / (2 M (1 - eB theta)^2) + const``; their product is the
    spacing, which must equal ``hbar omega*``.
    """
    one_minus = _check_noncritical(p)
    omega = p.charge_e * p.B / p.M
    commutator = 2.0 * p.hbar * one_minus * p.M * omega
    prefactor = 1.0 / (2.0 * p.M * one_minus**2)
    return commutator * prefactor


def velocity(state: ClassicalState, p: LandauParams) -> np.ndarray:
    """``x_dot`` from ``M* x_dot_i = p_i - M e theta eps_ij E_j``."""
    M_star, _, _ = effective_params(p)
    E = np.asarray(p.E_field)
    return (state.p - p.M * p.charge_e * p.theta_nc * (EPS @ E)) / M_star


def cyclotron_closed_form(init: ClassicalState, p: LandauParams) -> CyclotronSolution:
    if p.has_field:
        raise UnsupportedError("closed-form cyclotron solution needs E = 0")
    M_star, _, w = effective_params(p)
    v0 = init.p / M_star
    if w == 0.0:
        raise UnsupportedError("B = 0: the motion is free, not cyclotronic")
    # v(t) = R(-w t) v0 and x_dot = w EPS R(-w t) alpha, so alpha = -EPS v0 / w
    # at the initial time; shift to t = 0 by undoing the rotation.
    alpha_t0 = -(EPS @ v0) / w
    alpha = rotation(w * init.t) @ alpha_t0
    beta = init.x - alpha_t0
    return CyclotronSolution(tuple(alpha), tuple(beta), w, M_star)


def _rhs(p: LandauParams) -> Callable[[np.ndarray], np.ndarray]:
    M_star, _, _ = effective_params(p)
    E = np.asarray(p.E_field)
    shift = p.M * p.charge_e * p.theta_nc * (EPS @ E)
    eB = p.charge_e * p.B
    eE = p.charge_e * E

    def f(y):
        xdot = (y[2:] - shift) / M_star
        pdot = eB * (EPS @ xdot) + eE
        return np.concatenate([xdot, pdot])

    return f


def integrate_eom(init: ClassicalState, p: LandauParams, t_end: float, dt: float) -> List[ClassicalState]:
    """Fixed-step RK4 trajectory from ``init.t`` to ``t_end`` (inclusive)."""
    if not dt > 0:
        raise InvalidArgumentError(f"dt must be positive, got {dt}")
    span = t_end - init.t
    if span < 0:
        raise InvalidArgumentError("t_end precedes the initial time")
    steps = int(math.ceil(span / dt - 1e-9))
    if steps > MAX_STEPS:
        raise InvalidArgumentError(f"{steps} steps requested, limit is {MAX_STEPS}")
    f = _rhs(p)
    h = span / steps if steps else 0.0
    y = init.as_array()
    out = [init]
    for k in range(1, steps + 1):
        k1 = f(y)
        k2 = f(y + 0.5 * h * k1)
        k3 = f(y + 0.5 * h * k2)
        k4 = f(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out.append(ClassicalState.from_array(y, init.t + k * h))
    return out


def hamiltonian(state: ClassicalState, p: LandauParams) -> float:
    return float(state.p @ state.p) / (2.0 * p.M)


def conserved_quantities(state: ClassicalState, p: LandauParams) -> Tuple[float, float, float, float]:
    """``(P1, P2, K1, K2)`` at the given phase-space point and time.

    ``P_i = M* (x_dot_i - omega* eps_ij x_j)`` and
    ``K_i = (M*/M) R(omega* t) p_i``, with ``x_dot = p / M*``.
    """
    if p.has_field:
        raise UnsupportedError("conserved quantities are only defined for E = 0")
    M_star, _, w = effective_params(p)
    xdot = state.p / M_star
    P = M_star * (xdot - w * (EPS @ state.x))
    K = (M_star / p.M) * (rotation(w * state.t) @ state.p)
    return float(P[0]), float(P[1]), float(K[0]), float(K[1])


def poisson_matrix(p: LandauParams) -> np.ndarray:
    """Bracket structure on ``(x1, x2, p1, p2)``: ``{f, g} = grad f . J . grad g``."""
    M_star, _, _ = effective_params(p)
    k = p.M / M_star
    J = np.zeros((4, 4))
    J[0:2, 0:2] = k * p.theta_nc * EPS
    J[0:2, 2:4] = k * np.eye(2)
    J[2:4, 0:2] = -k * np.eye(2)
    J[2:4, 2:4] = k * p.charge_e * p.B * EPS
    return J


def poisson_bracket(f, g, state: ClassicalState, p: LandauParams, h: float = 1e-5) -> float:
    """Central-difference bracket of two phase-space functions ``f(state)``, ``g(state)``.

    Time is held fixed; only ``(x, p)`` are differentiated.
    """
    y0 = state.as_array()

    def grad(fun):
        out = np.empty(4)
        for i in range(4):
            e = np.zeros(4)
            e[i] = h
            out[i] = (fun(ClassicalState.from_array(y0 + e, state.t))
                      - fun(ClassicalState.from_array(y0 - e, state.t))) / (2 * h)
        return out

    return float(grad(f) @ poisson_matrix(p) @ grad(g))


def cyclotron_period(p: LandauParams) -> float:
    _, _, w = effective_params(p)
    return 2.0 * math.pi / abs(w)


def conservation_drift(init: ClassicalState, p: LandauParams, periods: float = 10.0,
                       steps_per_period: int = 1000) -> dict:
    """Run RK4 and report the worst drift of each conserved quantity.

    Drift is relative to the initial magnitude, or absolute when that
    magnitude is below one.
    """
    T = cyclotron_period(p)
    traj = integrate_eom(init, p, init.t + periods * T, T / steps_per_period)
    names = ("P1", "P2", "K1", "K2")
    q0 = conserved_quantities(traj[0], p)
    worst = dict.fromkeys(names, 0.0)
    for s in traj[1:]:
        q = conserved_quantities(s, p)
        for name, a, b in zip(names, q0, q):
            worst[name] = max(worst[name], abs(b - a) / max(1.0, abs(a)))
    h0 = hamiltonian(traj[0], p)
    worst["H"] = max(abs(hamiltonian(s, p) - h0) for s in traj) / max(1.0, abs(h0))
    return worst
