"""Command-line front end: model files in, sweeps and verdicts out.

Model files are JSON. Matrix literals are lists of rows whose entries are
[re, im] pairs; the operator presets sigma_x, sigma_y, sigma_z, sigma_plus,
sigma_minus and identity expand to the exact 2 x 2 matrices. All floats are
printed with 17 significant digits and JSON keys are sorted, so output for a
fixed (model, flags, seed) is byte-identical run to run.

Exit codes: 0 success, 1 verification failure, 2 model parse error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .choi import choi_of_map, is_cp, is_tp_marginal, ChoiMatrix
from .dynamics import GKLSModel, RateFunction, intermediate_map
from .exceptions import ModelParseError
from .measures import (DEFAULT_EPSILON, measure_report, normalized_ronm,
                       ronm_rate, rhp_integrand, simpson_sum, total_rhp,
                       total_ronm)
from .verify import SUITES

CSV_HEADER = "t,ronm_rate,rhp_integrand,is_cp,min_eigenvalue"

PRESETS = {
    "sigma_x": np.array([[0, 1], [1, 0]], dtype=complex),
    "sigma_y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "sigma_z": np.array([[1, 0], [0, -1]], dtype=complex),
    "sigma_plus": np.array([[0, 0], [1, 0]], dtype=complex),
    "sigma_minus": np.array([[0, 1], [0, 0]], dtype=complex),
    "identity": np.array([[1, 0], [0, 1]], dtype=complex),
}


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def dumps(obj, indent: int = 0) -> str:
    """JSON with sorted keys and 17-significant-digit floats."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = [f"{inner}{json.dumps(str(k))}: {dumps(obj[k], indent + 1)}"
                 for k in sorted(obj)]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        parts = [f"{inner}{dumps(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(parts) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    return json.dumps(obj)


def _parse_matrix(value, dim: int, field: str) -> np.ndarray:
    if isinstance(value, str):
        if value not in PRESETS:
            raise ModelParseError(field, f"unknown preset {value!r}")
        matrix = PRESETS[value]
        if matrix.shape != (dim, dim):
            raise ModelParseError(field, f"preset {value!r} is 2x2, model dim is {dim}")
        return matrix
    try:
        rows = [[complex(re, im) for re, im in row] for row in value]
        matrix = np.array(rows, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise ModelParseError(field, f"expected rows of [re, im] pairs ({exc})")
    if matrix.shape != (dim, dim):
        raise ModelParseError(field, f"matrix has shape {matrix.shape}, expected {(dim, dim)}")
    return matrix


def _parse_rate(value, field: str) -> RateFunction:
    if not isinstance(value, dict) or "kind" not in value:
        raise ModelParseError(field, "rate must be an object with 'kind' and 'params'")
    try:
        return RateFunction(kind=value["kind"], params=tuple(value.get("params", ())))
    except (TypeError, ValueError) as exc:
        raise ModelParseError(field, str(exc))


def parse_model(path: str) -> tuple[GKLSModel, dict]:
    """Read a model file; returns the model and its horizon {t0, t1, steps}."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            spec = json.load(handle)
    except OSError as exc:
        raise ModelParseError("file", str(exc))
    except json.JSONDecodeError as exc:
        raise ModelParseError("file", f"invalid JSON: {exc}")
    for required in ("dim", "hamiltonian", "dissipators", "horizon"):
        if required not in spec:
            raise ModelParseError(required, "missing")
    try:
        dim = int(spec["dim"])
    except (TypeError, ValueError):
        raise ModelParseError("dim", "must be an integer")
    if dim < 2:
        raise ModelParseError("dim", f"must be >= 2, got {dim}")
    hamiltonian = _parse_matrix(spec["hamiltonian"], dim, "hamiltonian")
    dissipators = []
    for i, entry in enumerate(spec["dissipators"]):
        if not isinstance(entry, dict) or "operator" not in entry or "rate" not in entry:
            raise ModelParseError(f"dissipators[{i}]", "needs 'operator' and 'rate'")
        operator = _parse_matrix(entry["operator"], dim, f"dissipators[{i}].operator")
        rate = _parse_rate(entry["rate"], f"dissipators[{i}].rate")
        dissipators.append((operator, rate))
    horizon = spec["horizon"]
    if not isinstance(horizon, dict):
        raise ModelParseError("horizon", "must be an object with t0, t1, steps")
    for key in ("t0", "t1", "steps"):
        if key not in horizon:
            raise ModelParseError(f"horizon.{key}", "missing")
    try:
        parsed_horizon = {"t0": float(horizon["t0"]), "t1": float(horizon["t1"]),
                          "steps": int(horizon["steps"])}
    except (TypeError, ValueError) as exc:
        raise ModelParseError("horizon", str(exc))
    try:
        model = GKLSModel(dim=dim, hamiltonian=hamiltonian, dissipators=tuple(dissipators))
    except ValueError as exc:
        raise ModelParseError("hamiltonian", str(exc))
    return model, parsed_horizon


def default_epsilon() -> float:
    env = os.environ.get("RONM_EPSILON")
    return float(env) if env else DEFAULT_EPSILON


def _sweep_row(model: GKLSModel, t: float, epsilon: float) -> dict:
    choi = choi_of_map(intermediate_map(model, t, epsilon, "first_order"))
    cp, min_eig = is_cp(choi)
    return {
        "t": float(t),
        "ronm_rate": ronm_rate(model, t, epsilon),
        "rhp_integrand": rhp_integrand(model, t, epsilon),
        "is_cp": cp,
        "min_eigenvalue": min_eig,
    }


def cmd_sweep(args) -> int:
    model, horizon = parse_model(args.model)
    steps = args.steps if args.steps is not None else horizon["steps"]
    t0, t1 = horizon["t0"], horizon["t1"]
    epsilon = args.epsilon if args.epsilon is not None else default_epsilon()
    if steps < 2 or steps % 2:
        raise ModelParseError("horizon.steps", f"must be even and >= 2, got {steps}")
    grid = np.linspace(t0, t1, steps + 1)
    with ThreadPoolExecutor(max_workers=min(8, os.cpu_count() or 1)) as pool:
        rows = list(pool.map(lambda t: _sweep_row(model, t, epsilon), grid))
    spacing = (t1 - t0) / steps
    if args.refine:
        n_total = total_ronm(model, t0, t1, steps, epsilon, refine=True)
        rhp_total = total_rhp(model, t0, t1, steps, epsilon, refine=True)
    else:
        n_total = simpson_sum([r["ronm_rate"] for r in rows], spacing)
        rhp_total = simpson_sum([r["rhp_integrand"] for r in rows], spacing)
    footer = {"n_total": n_total, "rhp_total": rhp_total,
              "n_norm": normalized_ronm(max(0.0, n_total))}
    if args.format == "csv":
        lines = [CSV_HEADER]
        for r in rows:
            lines.append(",".join([
                format_float(r["t"]), format_float(r["ronm_rate"]),
                format_float(r["rhp_integrand"]),
                "true" if r["is_cp"] else "false",
                format_float(r["min_eigenvalue"]),
            ]))
        for key in ("n_total", "rhp_total", "n_norm"):
            lines.append(f"# {key}={format_float(footer[key])}")
        text = "\n".join(lines) + "\n"
    else:
        text = dumps({"rows": rows, "footer": footer}) + "\n"
    with open(args.out, "w", encoding="utf-8") as handle:
        handle.write(text)
    return 0


def cmd_measure(args) -> int:
    model, _ = parse_model(args.model)
    epsilon = args.epsilon if args.epsilon is not None else default_epsilon()
    report = measure_report(model, args.t, epsilon)
    choi = choi_of_map(intermediate_map(model, args.t, epsilon, "first_order"))
    cp, min_eig = is_cp(choi)
    dec = report.decomposition
    delta_star_choi = ChoiMatrix(sys_dim=choi.sys_dim, matrix=dec.delta_star)
    _, delta_dev = is_tp_marginal(delta_star_choi)
    if dec.tau_star is None:
        tau_trace, tau_dev = None, None
    else:
        tau_trace = float(np.real(np.trace(dec.tau_star)))
        _, tau_dev = is_tp_marginal(ChoiMatrix(sys_dim=choi.sys_dim, matrix=dec.tau_star))
    payload = {
        "t": report.t,
        "epsilon": report.epsilon,
        "ronm": report.ronm,
        "ronm_rate": report.ronm_rate,
        "rhp_integrand": report.rhp_integrand,
        "witness_value": report.witness.value,
        "duality_gap": report.duality_gap,
        "is_cp": cp,
        "min_eigenvalue": min_eig,
        "decomposition": {
            "s_star": dec.s_star,
            "trace_delta_star": float(np.real(np.trace(dec.delta_star))),
            "trace_tau_star": tau_trace,
            "delta_star_tp_deviation": delta_dev,
            "tau_star_tp_deviation": tau_dev,
        },
    }
    sys.stdout.write(dumps(payload) + "\n")
    return 0


def cmd_verify(args) -> int:
    results = SUITES[args.suite](args.seed)
    all_passed = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        all_passed = all_passed and r.passed
        sys.stdout.write(f"{status} {r.name} worst={format_float(r.margin)}\n")
    sys.stdout.write(f"suite={args.suite} seed={args.seed} "
                     f"result={'PASS' if all_passed else 'FAIL'}\n")
    return 0 if all_passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ronm",
        description="Robustness-based non-Markovianity measure for GKLS models.")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="evaluate rates over the model horizon")
    sweep.add_argument("--model", required=True)
    sweep.add_argument("--out", required=True)
    sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    sweep.add_argument("--epsilon", type=float, default=None)
    sweep.add_argument("--steps", type=int, default=None)
    sweep.add_argument("--refine", action="store_true",
                       help="bisect non-Markovian window edges before integrating")
    sweep.set_defaults(func=cmd_sweep)

    measure = sub.add_parser("measure", help="full measure report at one time")
    measure.add_argument("--model", required=True)
    measure.add_argument("--t", type=float, required=True)
    measure.add_argument("--epsilon", type=float, default=None)
    measure.set_defaults(func=cmd_measure)

    verify = sub.add_parser("verify", help="run a seeded invariant suite")
    verify.add_argument("--suite", choices=sorted(SUITES), required=True)
    verify.add_argument("--seed", type=int, default=0)
    verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ModelParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (ArithmeticError, np.linalg.LinAlgError, ValueError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
