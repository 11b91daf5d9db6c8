"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 invalid or degenerate input.
Settings resolve as command-line flags, then ``--config`` file
(``key=value`` per line, keys named like the flags), then defaults.
"""
from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from . import landau_model as lm
from . import quasi_bell as qb
from . import teleport_protocol as tp
from . import verification as ver
from .errors import (BasisUndefinedError, CriticalCaseError, DegenerateStateError,
                     InvalidArgumentError, UnsupportedError)
from .formatting import record_csv, to_csv, to_json

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_INVALID = 0, 1, 2

SWEEP_COLUMNS = ("abs_alpha", "abs_beta", "s", "s_prime", "theta", "theta_prime", "P1", "P2",
                 "fidelity", "concurrence", "masfi", "entropy_1", "entropy_2", "flag")

DEFAULTS: Dict[str, Any] = {
    "alpha": "0.8", "beta": "0.8", "cutoff": None, "tolerance": None, "format": None,
    "output": None, "seed": 0, "parallel": False,
    "theta": None, "theta_prime": None, "formal_limit": False, "shots": 0,
    "vary": "diagonal", "start": 0.2, "stop": 3.0, "count": 57,
    "M": 1.0, "e": 1.0, "B": 1.0, "theta_nc": 0.0, "kappa": None, "hbar": 1.0,
    "E1": 0.0, "E2": 0.0, "x1": 1.0, "x2": 0.0, "p1": 0.0, "p2": 1.0,
    "levels": 5, "periods": 10.0, "steps_per_period": 1000,
    "alpha_max": None, "lattice_size": ver.LATTICE_SIZE,
}
DEFAULT_FORMAT = {"metrics": "json", "teleport": "json", "sweep": "csv", "landau": "json", "verify": "csv"}


class UsageError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def parse_complex(text: str) -> complex:
    """``"0.5"``, ``"0.3+0.4i"`` or ``"0.3+0.4j"``."""
    t = str(text).strip().replace(" ", "").replace("i", "j")
    try:
        return complex(t)
    except ValueError:
        raise UsageError("invalid_argument", f"cannot parse complex label {text!r}") from None


def _angle(text, other=None) -> Optional[float]:
    if text is None:
        return None
    if str(text).strip().lower() == "same":
        return other
    return float(text)


def read_config(path: str) -> Dict[str, str]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError("invalid_config", f"{path}:{lineno}: expected key=value")
            key, value = line.split("=", 1)
            out[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    common.add_argument("--alpha", default=S, help="label of mode A, e.g. 0.8 or 0.5+0.2i")
    common.add_argument("--beta", default=S, help="label of mode B")
    common.add_argument("--cutoff", type=int, default=S, help="Fock cutoff per mode for oracle runs")
    common.add_argument("--tolerance", type=float, default=S, help="override every check tolerance")
    common.add_argument("--format", choices=("json", "csv"), default=S)
    common.add_argument("--output", default=S, help="write here instead of stdout")
    common.add_argument("--seed", type=int, default=S)
    common.add_argument("--config", default=S, help="key=value settings file")
    common.add_argument("--parallel", action="store_true", default=S)

    parser = argparse.ArgumentParser(prog="quasibell", description="Quasi-Bell channel teleportation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("metrics", parents=[common], help="overlaps, Gram entries, spectra, entropies")

    p = sub.add_parser("teleport", parents=[common], help="probabilities, fidelity, concurrence, MASFI")
    p.add_argument("--theta", default=S, help="mixing angle of mode A (overrides --alpha)")
    p.add_argument("--theta-prime", dest="theta_prime", default=S, help="mixing angle of mode B, or 'same'")
    p.add_argument("--formal-limit", dest="formal_limit", action="store_true", default=S)
    p.add_argument("--shots", type=int, default=S)

    p = sub.add_parser("sweep", parents=[common], help="CSV table over a label range")
    p.add_argument("--vary", choices=("diagonal", "alpha", "beta"), default=S)
    p.add_argument("--start", type=float, default=S)
    p.add_argument("--stop", type=float, default=S)
    p.add_argument("--count", type=int, default=S)

    p = sub.add_parser("landau", parents=[common], help="exotic Landau model diagnostics")
    for name in ("M", "e", "B", "hbar", "E1", "E2", "x1", "x2", "p1", "p2", "periods"):
        p.add_argument(f"--{name}", type=float, default=S)
    p.add_argument("--theta-nc", dest="theta_nc", type=float, default=S)
    p.add_argument("--kappa", type=float, default=S)
    p.add_argument("--levels", type=int, default=S)
    p.add_argument("--steps-per-period", dest="steps_per_period", type=int, default=S)

    p = sub.add_parser("verify", parents=[common], help="closed forms against the brute-force oracle")
    p.add_argument("--alpha-max", dest="alpha_max", type=float, default=S)
    p.add_argument("--lattice-size", dest="lattice_size", type=int, default=S)
    return parser


_TYPES = {"cutoff": int, "tolerance": float, "seed": int, "shots": int, "start": float, "stop": float,
          "count": int, "levels": int, "steps_per_period": int, "lattice_size": int, "alpha_max": float,
          "M": float, "e": float, "B": float, "theta_nc": float, "kappa": float, "hbar": float,
          "E1": float, "E2": float, "x1": float, "x2": float, "p1": float, "p2": float, "periods": float}
_BOOLS = {"parallel", "formal_limit"}


def resolve(args: argparse.Namespace) -> Dict[str, Any]:
    """Merge flags over config file over defaults."""
    given = vars(args)
    cfg: Dict[str, Any] = {}
    if "config" in given:
        for key, raw in read_config(given["config"]).items():
            if key not in DEFAULTS:
                raise UsageError("invalid_config", f"unknown config key {key!r}")
            if key in _BOOLS:
                cfg[key] = raw.lower() in ("1", "true", "yes", "on")
            elif key in _TYPES:
                cfg[key] = _TYPES[key](raw)
            else:
                cfg[key] = raw
    merged = dict(DEFAULTS)
    merged.update(cfg)
    merged.update({k: v for k, v in given.items() if k != "config"})
    if merged["format"] is None:
        merged["format"] = DEFAULT_FORMAT[merged["command"]]
    if merged["tolerance"] is not None and not merged["tolerance"] > 0:
        raise UsageError("invalid_argument", "tolerance must be positive")
    return merged


def _error(code: str, message: str) -> Dict[str, Any]:
    return {"error": {"code": code, "message": message}}


def _spec_fields(spec: qb.ChannelSpec) -> Dict[str, Any]:
    return {
        "alpha": spec.alpha, "beta": spec.beta,
        "abs_alpha": spec.abs_alpha, "abs_beta": spec.abs_beta,
        "s": spec.s, "s_prime": spec.s_prime,
        "theta": spec.theta_mix, "theta_prime": spec.theta_prime_mix,
    }


# -- subcommands ---------------------------------------------------------------

def cmd_metrics(cfg: Dict[str, Any]):
    spec = qb.make_channel(parse_complex(cfg["alpha"]), parse_complex(cfg["beta"]))
    g = qb.gram_matrix(spec)
    rec = _spec_fields(spec)
    rec["G13"] = g[0, 2]
    rec["G24"] = None if math.isnan(g[1, 3]) else g[1, 3]
    states = {}
    failed = False
    for i in qb.INDICES:
        try:
            lam = qb.reduced_eigs(i, spec)
            states[str(i)] = {"lambda": lam[0], "lambda_prime": lam[1],
                              "entropy_bits": qb.entanglement_entropy(i, spec)}
        except DegenerateStateError as exc:
            failed = True
            states[str(i)] = _error("degenerate_state", str(exc))
    rec["states"] = states
    rec["concurrence"] = qb.concurrence_channel(spec)
    return rec, EXIT_INVALID if failed else EXIT_OK


def _teleport_spec(cfg: Dict[str, Any]) -> qb.ChannelSpec:
    theta = _angle(cfg["theta"])
    theta_p = _angle(cfg["theta_prime"], theta)
    if theta is None and theta_p is None:
        return qb.make_channel(parse_complex(cfg["alpha"]), parse_complex(cfg["beta"]))
    if theta is None or theta_p is None:
        raise UsageError("invalid_argument", "--theta and --theta-prime must be given together")
    try:
        return qb.channel_from_angles(theta, theta_p)
    except InvalidArgumentError as exc:
        raise UsageError("invalid_argument", str(exc)) from None


def cmd_teleport(cfg: Dict[str, Any]):
    spec = _teleport_spec(cfg)
    try:
        rep = tp.teleport_report(spec, allow_formal=cfg["formal_limit"])
    except BasisUndefinedError as exc:
        return _error("basis_undefined", f"{exc}; use --formal-limit for closed forms only"), EXIT_INVALID
    rec = _spec_fields(spec)
    rec["formal_limit"] = rep.formal_limit
    rec["probabilities"] = dict(zip(("P1", "P2", "P3", "P4"), rep.probabilities))
    rec["fidelity"] = rep.fidelity
    rec["concurrence"] = rep.concurrence
    rec["masfi"] = rep.masfi
    if rep.outcomes:
        rec["outcomes"] = [{"label": o.label, "probability": o.probability,
                            "corrected_state": [complex(z) for z in o.bella_state_corrected]}
                           for o in rep.outcomes]
    shots = cfg["shots"]
    if shots:
        if rep.formal_limit:
            return _error("basis_undefined", "sampling needs a well-defined basis"), EXIT_INVALID
        idx = tp.sample_outcomes(spec, shots, cfg["seed"])
        counts = np.bincount(idx, minlength=4)
        rec["shots"] = shots
        rec["seed"] = cfg["seed"]
        rec["counts"] = {lab: int(c) for lab, c in zip(tp.LABELS, counts)}
        rec["frequencies"] = {lab: float(c) / shots for lab, c in zip(tp.LABELS, counts)}
    return rec, EXIT_OK


def sweep_row(a: float, b: float) -> List[Any]:
    spec = qb.make_channel(a, b)
    flags = []
    formal = tp.is_formal_limit(spec)
    if formal:
        flags.append("basis_undefined")
        p1 = p2 = None
    else:
        p1, p2, _, _ = tp.measurement_probabilities(spec)
    ent1 = qb.entanglement_entropy(1, spec)
    if spec.odd_degenerate:
        flags.append("degenerate_odd_state")
        ent2 = None
    else:
        ent2 = qb.entanglement_entropy(2, spec)
    if formal:
        flags.append("formal_limit")
    return [spec.abs_alpha, spec.abs_beta, spec.s, spec.s_prime, spec.theta_mix, spec.theta_prime_mix,
            p1, p2, tp.fidelity(spec), qb.concurrence_channel(spec), tp.masfi(spec), ent1, ent2,
            ";".join(flags)]


def _sweep_task(pair):
    return sweep_row(*pair)


def sweep_points(cfg: Dict[str, Any]) -> List[tuple]:
    start, stop, count = cfg["start"], cfg["stop"], cfg["count"]
    if count < 2:
        raise UsageError("invalid_argument", "--count must be at least 2")
    if not start < stop:
        raise UsageError("invalid_argument", "--start must be below --stop")
    if start < 0:
        raise UsageError("invalid_argument", "label moduli must be non-negative")
    grid = np.linspace(start, stop, count)
    vary = cfg["vary"]
    if vary == "diagonal":
        return [(float(x), float(x)) for x in grid]
    if vary == "alpha":
        b = abs(parse_complex(cfg["beta"]))
        return [(float(x), b) for x in grid]
    a = abs(parse_complex(cfg["alpha"]))
    return [(a, float(x)) for x in grid]


def cmd_sweep(cfg: Dict[str, Any]):
    points = sweep_points(cfg)
    if cfg["parallel"]:
        with ProcessPoolExecutor() as pool:
            rows = list(pool.map(_sweep_task, points))
    else:
        rows = [sweep_row(a, b) for a, b in points]
    return {"columns": list(SWEEP_COLUMNS), "rows": rows}, EXIT_OK


def cmd_landau(cfg: Dict[str, Any]):
    kw = dict(charge_e=cfg["e"], B=cfg["B"], hbar=cfg["hbar"], E_field=(cfg["E1"], cfg["E2"]))
    try:
        if cfg["kappa"] is not None:
            params = lm.LandauParams.from_kappa(cfg["kappa"], M=cfg["M"], **kw)
        else:
            params = lm.LandauParams(M=cfg["M"], theta_nc=cfg["theta_nc"], **kw)
        M_star, omega, omega_star = lm.effective_params(params)
    except CriticalCaseError as exc:
        return _error("critical_case", f"e*theta*B = 1 is excluded: {exc}"), EXIT_INVALID
    except InvalidArgumentError as exc:
        return _error("invalid_argument", str(exc)), EXIT_INVALID
    levels = [lm.energy_level(n, params) for n in range(cfg["levels"] + 1)]
    rec: Dict[str, Any] = {
        "M": params.M, "e": params.charge_e, "B": params.B, "theta_nc": params.theta_nc,
        "kappa": params.kappa, "hbar": params.hbar,
        "M_star": M_star, "omega": omega, "omega_star": omega_star,
        "levels": levels,
        "spacing": [b - a for a, b in zip(levels, levels[1:])],
        "hbar_omega_star": params.hbar * omega_star,
    }
    init = lm.ClassicalState(cfg["x1"], cfg["x2"], cfg["p1"], cfg["p2"])
    try:
        drift = lm.conservation_drift(init, params, cfg["periods"], cfg["steps_per_period"])
        rec["drift"] = drift
        rec["max_drift"] = max(drift[k] for k in ("P1", "P2", "K1", "K2"))
    except UnsupportedError as exc:
        rec["drift"] = None
        rec["note"] = str(exc)
    return rec, EXIT_OK


def cmd_verify(cfg: Dict[str, Any]):
    labels = ver.grid_labels(cfg["alpha_max"])
    report = ver.run_verification(labels, cutoff=cfg["cutoff"], tolerance=cfg["tolerance"],
                                  parallel=cfg["parallel"], lattice_size=cfg["lattice_size"])
    rows = [[r.name, r.max_deviation, r.tolerance, r.status, r.note] for r in report.results]
    rec = {"passed": report.passed, "grid": labels,
           "columns": ["name", "max_deviation", "tolerance", "status", "note"], "rows": rows}
    return rec, EXIT_OK if report.passed else EXIT_VERIFY_FAILED


COMMANDS = {"metrics": cmd_metrics, "teleport": cmd_teleport, "sweep": cmd_sweep,
            "landau": cmd_landau, "verify": cmd_verify}


def render(rec: Dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return to_json(rec)
    if "columns" in rec and "rows" in rec:
        return to_csv(rec["columns"], rec["rows"])
    return record_csv(rec)


def _write(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    fmt = getattr(args, "format", None) or DEFAULT_FORMAT[args.command]
    output = None
    try:
        cfg = resolve(args)
        fmt, output = cfg["format"], cfg["output"]
        rec, code = COMMANDS[cfg["command"]](cfg)
    except (UsageError, ValueError, OSError) as exc:
        rec, code = _error(getattr(exc, "code", "invalid_argument"), str(exc)), EXIT_INVALID
        if fmt == "csv":
            print(f"error: {exc}", file=sys.stderr)
            return code
    _write(render(rec, fmt), output)
    return code


if __name__ == "__main__":
    sys.exit(main())
