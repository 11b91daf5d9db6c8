"""Grid comparison of closed forms against the brute-force oracle.

:func:`run_verification` returns one :class:`CheckResult` per named check.
A check's deviation is the worst value over every point it was evaluated on.
``INFO`` rows are recorded findings, not pass/fail gates.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import landau_model as lm
from . import oracle as orc
from . import quasi_bell as qb
from . import teleport_protocol as tp
from .errors import TruncationError

DEFAULT_GRID = (0.3, 0.6, 1.0, 1.5)
BELL_LIMIT_LABEL = 3.0
LATTICE_SIZE = 20

# name -> (tolerance, kind); kind is "check" or "info"
CHECKS: Dict[str, Tuple[float, str]] = {
    "truncation": (0.0, "check"),
    "gram_vs_oracle": (1e-10, "check"),
    "reduced_rank_two": (1e-10, "check"),
    "reduced_trace": (1e-10, "check"),
    "reduced_eigs_vs_oracle": (1e-10, "check"),
    "squared_form_even_equal_labels": (1e-10, "check"),
    "squared_form_even_unequal_labels": (1e-10, "info"),
    "squared_form_odd_states": (1e-10, "info"),
    "entropy_vs_oracle": (1e-9, "check"),
    "entropy_mode_symmetry": (1e-9, "check"),
    "probabilities_vs_oracle": (1e-10, "check"),
    "probability_sum": (1e-10, "check"),
    "fidelity_vs_oracle": (1e-9, "check"),
    "conditional_states_vs_oracle": (1e-10, "check"),
    "channel_coeffs_vs_oracle": (1e-10, "check"),
    "concurrence_vs_oracle": (1e-10, "check"),
    "concurrence_vs_coeffs": (1e-12, "check"),
    "branch_leakage": (1e-10, "check"),
    "bell_projectors": (1e-10, "check"),
    "cutoff_stability": (1e-12, "check"),
    "lattice_fidelity_vs_oracle": (1e-9, "check"),
    "lattice_fidelity_vs_outcomes": (1e-12, "check"),
    "lattice_fidelity_above_masfi": (0.0, "check"),
    "equal_angle_fidelity": (1e-12, "check"),
    "equal_angle_masfi": (1e-12, "check"),
    "formal_endpoint": (0.0, "check"),
    "bell_limit": (1e-6, "check"),
    "landau_drift": (1e-8, "check"),
    "landau_spacing": (1e-12, "check"),
}


@dataclass
class CheckResult:
    name: str
    max_deviation: float
    tolerance: float
    kind: str = "check"
    points: int = 0
    note: str = ""

    @property
    def status(self) -> str:
        if self.kind == "info":
            return "INFO"
        return "PASS" if self.max_deviation <= self.tolerance else "FAIL"


@dataclass
class VerificationReport:
    results: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.status != "FAIL" for r in self.results)

    def get(self, name: str) -> CheckResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)


def _phase_aligned_distance(u: np.ndarray, v: np.ndarray) -> float:
    ov = np.vdot(u, v)
    ph = ov / abs(ov) if abs(ov) > 0 else 1.0
    return float(np.max(np.abs(u * ph - v)))


def _quantities(spec: qb.ChannelSpec, config: orc.OracleConfig) -> np.ndarray:
    """Oracle outputs stacked into one vector, for cutoff-stability comparison."""
    q = tp.canonical_input(spec)
    run = orc.oracle_teleport(spec, (q.a1, q.a2), config)
    g = orc.oracle_gram(spec, config)
    eig = [orc.oracle_reduced(spec, i, config).top_two for i in (1, 2, 3, 4)]
    return np.concatenate([np.nan_to_num(g.ravel()), np.ravel(eig), run.probabilities, [run.fidelity]])


def point_checks(a: float, b: float, cutoff: Optional[int] = None,
                 stability: bool = True) -> Dict[str, float]:
    """All per-point deviations for channel labels ``(a, b)``."""
    spec = qb.make_channel(a, b)
    config = orc.OracleConfig(cutoff=cutoff)
    dev: Dict[str, float] = {}
    try:
        g = orc.oracle_gram(spec, config)
    except TruncationError as exc:
        return {"truncation": exc.deficit}
    dev["truncation"] = 0.0

    closed = qb.gram_matrix(spec)
    dev["gram_vs_oracle"] = max(abs(g[0, 2] - closed[0, 2]), abs(g[1, 3] - closed[1, 3]))

    rank = trace = eigs = even_eq = even_ne = odd = ent = sym = 0.0
    for i in (1, 2, 3, 4):
        red = orc.oracle_reduced(spec, i, config)
        red_b = orc.oracle_reduced(spec, i, config, keep=1)
        w = red.eigenvalues
        rank = max(rank, abs(w[-3]) if len(w) > 2 else 0.0, abs(w[0]))
        top = np.array(red.top_two)
        trace = max(trace, abs(top.sum() - 1.0))
        eigs = max(eigs, float(np.max(np.abs(top - np.sort(qb.reduced_eigs(i, spec))))))
        printed = np.sort(qb.squared_form_eigs(i, spec))
        d = float(np.max(np.abs(top - printed)))
        if i in (1, 3):
            if math.isclose(a, b):
                even_eq = max(even_eq, d)
            else:
                even_ne = max(even_ne, d)
        else:
            odd = max(odd, d)
        ent = max(ent, abs(red.entropy_bits - qb.entanglement_entropy(i, spec)))
        sym = max(sym, abs(red.entropy_bits - red_b.entropy_bits))
    dev.update({
        "reduced_rank_two": rank,
        "reduced_trace": trace,
        "reduced_eigs_vs_oracle": eigs,
        "squared_form_odd_states": odd,
        "entropy_vs_oracle": ent,
        "entropy_mode_symmetry": sym,
    })
    if math.isclose(a, b):
        dev["squared_form_even_equal_labels"] = even_eq
    else:
        dev["squared_form_even_unequal_labels"] = even_ne

    q = tp.canonical_input(spec)
    run = orc.oracle_teleport(spec, (q.a1, q.a2), config)
    probs = np.array(tp.measurement_probabilities(spec))
    dev["probabilities_vs_oracle"] = float(np.max(np.abs(np.array(run.probabilities) - probs)))
    dev["probability_sum"] = max(abs(sum(run.probabilities) - 1.0), abs(probs.sum() - 1.0))
    dev["fidelity_vs_oracle"] = abs(run.fidelity - tp.fidelity(spec))
    outs = tp.conditional_states(spec, q)
    dev["conditional_states_vs_oracle"] = max(
        max(_phase_aligned_distance(o.bella_state_raw, r) for o, r in zip(outs, run.raw_states)),
        max(_phase_aligned_distance(o.bella_state_corrected, c) for o, c in zip(outs, run.corrected_states)),
    )
    coeffs = np.array(tp.channel_in_onb(spec)).reshape(2, 2)
    dev["channel_coeffs_vs_oracle"] = float(np.max(np.abs(run.channel_coeffs - coeffs)))
    dev["concurrence_vs_oracle"] = abs(run.concurrence - qb.concurrence_channel(spec))
    dev["concurrence_vs_coeffs"] = abs(tp.pure_concurrence(*coeffs.ravel()) - qb.concurrence_channel(spec))
    dev["branch_leakage"] = run.leakage
    dev["bell_projectors"] = orc.bell_projector_deviation(spec, config)
    if stability:
        n = config.cutoff_for(a, b)
        base = _quantities(spec, config)
        doubled = _quantities(spec, orc.OracleConfig(cutoff=2 * n))
        dev["cutoff_stability"] = float(np.max(np.abs(base - doubled)))
    return dev


def _point_task(args):
    return point_checks(*args)


def lattice_checks(size: int = LATTICE_SIZE, cutoff: Optional[int] = None) -> Dict[str, float]:
    """Fidelity checks on the ``(theta, theta')`` lattice ``k pi / (4 (size + 1))``."""
    angles = [math.pi / 4 * k / (size + 1) for k in range(1, size + 1)]
    worst = {"lattice_fidelity_vs_oracle": 0.0, "lattice_fidelity_vs_outcomes": 0.0,
             "lattice_fidelity_above_masfi": 0.0}
    config = orc.OracleConfig(cutoff=cutoff)
    for t in angles:
        for tq in angles:
            spec = qb.channel_from_angles(t, tq)
            q = tp.canonical_input(spec)
            f = tp.fidelity(spec)
            try:
                run = orc.oracle_teleport(spec, (q.a1, q.a2), config)
            except TruncationError as exc:
                worst["truncation"] = max(worst.get("truncation", 0.0), exc.deficit)
                continue
            worst["lattice_fidelity_vs_oracle"] = max(worst["lattice_fidelity_vs_oracle"], abs(run.fidelity - f))
            f_out = tp.fidelity_from_outcomes(tp.conditional_states(spec, q), q)
            worst["lattice_fidelity_vs_outcomes"] = max(worst["lattice_fidelity_vs_outcomes"], abs(f_out - f))
            worst["lattice_fidelity_above_masfi"] = max(worst["lattice_fidelity_above_masfi"],
                                                        max(0.0, tp.masfi(spec) - f))
    return worst


def special_case_checks(size: int = LATTICE_SIZE) -> Dict[str, float]:
    angles = [math.pi / 4 * k / (size + 1) for k in range(1, size + 1)]
    fid = mas = 0.0
    for t in angles:
        spec = qb.channel_from_angles(t, t)
        fid = max(fid, abs(tp.fidelity(spec) - tp.fidelity_equal_angles(spec.theta_mix)))
        mas = max(mas, abs(tp.masfi(spec) - tp.masfi_equal_angles(spec.theta_mix)))
    end = qb.channel_from_angles(math.pi / 4, math.pi / 4)
    endpoint = max(abs(tp.fidelity(end) - 1.0), abs(tp.masfi(end)))
    return {"equal_angle_fidelity": fid, "equal_angle_masfi": mas, "formal_endpoint": endpoint}


def bell_limit_check(label: float = BELL_LIMIT_LABEL, cutoff: Optional[int] = None) -> Dict[str, float]:
    spec = qb.make_channel(label, label)
    config = orc.OracleConfig(cutoff=cutoff)
    try:
        q = tp.canonical_input(spec)
        run = orc.oracle_teleport(spec, (q.a1, q.a2), config)
    except TruncationError as exc:
        return {"truncation": exc.deficit}
    devs = [abs(p - 0.25) for p in run.probabilities]
    devs += [abs(run.fidelity - 1.0), abs(tp.fidelity(spec) - 1.0), abs(tp.masfi(spec) - 1.0)]
    devs += [_phase_aligned_distance(c, q.vector) for c in run.corrected_states]
    return {"bell_limit": max(devs)}


def landau_checks() -> Dict[str, float]:
    rng = np.random.default_rng(2024)
    drift = spacing = 0.0
    for coupling in (0.0, 0.3, 0.7):
        M, e, B = rng.uniform(0.5, 2.0, size=3)
        params = lm.LandauParams(M=M, charge_e=e, B=B, theta_nc=coupling / (e * B))
        init = lm.ClassicalState(*rng.uniform(-1.0, 1.0, size=4))
        worst = lm.conservation_drift(init, params)
        drift = max(drift, *(worst[k] for k in ("P1", "P2", "K1", "K2")))
        _, _, w = lm.effective_params(params)
        ladder = [lm.energy_level(n, params) for n in range(6)]
        spacing = max(spacing, max(abs((b - a) - params.hbar * w) / (params.hbar * w)
                                   for a, b in zip(ladder, ladder[1:])))
    return {"landau_drift": drift, "landau_spacing": spacing}


def grid_labels(alpha_max: Optional[float] = None) -> List[float]:
    labels = list(DEFAULT_GRID)
    if alpha_max is not None:
        labels = [v for v in labels if v <= alpha_max]
        if alpha_max not in labels:
            labels.append(float(alpha_max))
    return labels


def run_verification(labels: Sequence[float] = DEFAULT_GRID, cutoff: Optional[int] = None,
                     tolerance: Optional[float] = None, parallel: bool = False,
                     lattice_size: int = LATTICE_SIZE, include_landau: bool = True) -> VerificationReport:
    points = [(a, b, cutoff) for a in labels for b in labels]
    if parallel:
        with ProcessPoolExecutor() as pool:
            per_point = list(pool.map(_point_task, points))
    else:
        per_point = [_point_task(p) for p in points]

    worst: Dict[str, float] = {}
    counts: Dict[str, int] = {}

    def merge(d: Dict[str, float], n: int = 1) -> None:
        for k, v in d.items():
            worst[k] = max(worst.get(k, 0.0), v)
            counts[k] = counts.get(k, 0) + n

    for d in per_point:
        merge(d)
    merge(lattice_checks(lattice_size, cutoff), lattice_size**2)
    merge(special_case_checks(lattice_size), lattice_size)
    merge(bell_limit_check(cutoff=cutoff))
    if include_landau:
        merge(landau_checks())

    report = VerificationReport()
    for name, (tol, kind) in CHECKS.items():
        if name not in worst:
            continue
        note = ""
        if name == "truncation" and worst[name] > 0:
            note = "truncation-insufficient: raise --cutoff"
        elif name == "squared_form_even_unequal_labels":
            note = "squared form differs from the partial-trace spectrum when |alpha| != |beta|"
        elif name == "squared_form_odd_states":
            note = "squared form does not match the odd-state spectrum"
        use_tol = tol if tolerance is None or kind == "info" or name == "truncation" else tolerance
        report.results.append(CheckResult(name, float(worst[name]), use_tol, kind, counts[name], note))
    return report
