"""Command-line front end: JSON jobs in, gate-trail reports out.

A job file (or stdin) carries one command plus the weight and symbol data;
the report lists every hypothesis the pipelines checked, with verdicts and
margins, and the resulting exponents in the same JSON form schema used on
input.  Exit codes: 0 all gates passed, 1 a mathematical gate failed (a
valid negative result), 2 input or schema error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import calculus, forms, oracle, symplectic
from .calculus import DegenerateStationaryPhase, PipelineReport
from .forms import MixedForm, Weight
from .linalg import SingularMatrixError
from .oracle import DecayError
from .symplectic import CanonicalMap, GraphError, SpectralGateError

EXIT_OK = 0
EXIT_GATE_FAILED = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3

_COMMANDS = ("analyze", "compose", "weyl-to-toeplitz", "adjoint",
             "pushforward", "verify")


class InputError(Exception):
    pass


def fmt_complex(z: complex) -> str:
    z = complex(z)
    sign = "+" if z.imag >= 0 or np.isnan(z.imag) else "-"
    return f"{z.real:.12g}{sign}{abs(z.imag):.12g}i"


def _require(obj: dict, key: str, context: str):
    if key not in obj:
        raise InputError(f"missing field {key!r} in {context}")
    return obj[key]


def _load_weight(job: dict, key: str = "weight") -> Weight:
    try:
        return forms.weight_from_json(_require(job, key, "job"))
    except ValueError as exc:
        raise InputError(f"bad {key}: {exc}") from None


def _load_symbols(job: dict, count: int) -> list[MixedForm]:
    raw = _require(job, "symbols", "job")
    if not isinstance(raw, list) or len(raw) < count:
        raise InputError(f"command needs {count} symbol(s) under 'symbols'")
    try:
        return [forms.mixed_from_json(entry) for entry in raw[:count]]
    except ValueError as exc:
        raise InputError(f"bad symbol: {exc}") from None


def _load_kappa(job: dict) -> CanonicalMap:
    raw = _require(job, "kappa", "job")
    try:
        return CanonicalMap(forms.matrix_from_json(raw))
    except ValueError as exc:
        raise InputError(f"bad kappa: {exc}") from None


def _options(job: dict, args) -> dict:
    opts = dict(job.get("options") or {})
    if args.tol is not None:
        opts["tol"] = args.tol
    grid = dict(opts.get("grid") or {})
    if args.grid_m is not None:
        grid["m"] = args.grid_m
    if args.grid_R is not None:
        grid["R"] = args.grid_R
    opts["grid"] = grid
    if args.oracle:
        opts["oracle"] = True
    opts.setdefault("tol", 1e-9)
    opts.setdefault("oracle", False)
    return opts


def _gates_json(report: PipelineReport) -> list[dict]:
    return [{"name": g.name, "passed": g.passed, "margin": f"{g.margin:.12g}",
             "detail": g.detail} for g in report.gates]


def _pipeline_json(report: PipelineReport) -> dict:
    out: dict = {"gates": _gates_json(report)}
    out["weyl_exponent"] = (forms.holo_to_json(report.weyl_exponent)
                            if report.weyl_exponent is not None else None)
    out["toeplitz_exponent"] = (forms.mixed_to_json(report.toeplitz_exponent)
                                if report.toeplitz_exponent is not None else None)
    out["certified_toeplitz"] = report.certified_toeplitz
    out["constant_estimate"] = (fmt_complex(report.constant_estimate)
                                if report.constant_estimate is not None else None)
    return out


def _grid_options(opts: dict, default_m: int) -> tuple[int, float | None]:
    grid_opts = opts.get("grid") or {}
    m = int(grid_opts.get("m") or default_m)
    half = grid_opts.get("R")
    return m, (float(half) if half else None)


def _oracle_section_analyze(q: MixedForm, w: Weight, report: PipelineReport,
                            opts: dict) -> dict:
    if w.n != 1:
        return {"skipped": "oracle runs at n = 1 only"}
    m, half_width = _grid_options(opts, 200)
    est = oracle.constant_estimate(report, q, w, m=m, half_width=half_width)
    report.constant_estimate = est.value
    # x-independence of the constant across sample points
    samples = np.array([0.3, -0.8, 0.5 + 0.5j, -0.2 - 0.6j, 1.0 + 0.1j])
    numeric = oracle.weyl_symbol_numeric(q, w, samples)
    engine = np.array([np.exp(1j * report.weyl_exponent(w.point([x]))) for x in samples])
    ratios = numeric / engine
    spread = float(np.max(np.abs(ratios / ratios[0] - 1.0)))
    return {"constant": fmt_complex(est.value),
            "constant_refinement_error": f"{est.error:.3e}",
            "constant_spread_over_points": f"{spread:.3e}"}


def run_analyze(job: dict, opts: dict) -> tuple[dict, int]:
    w = _load_weight(job)
    (q,) = _load_symbols(job, 1)
    report = calculus.toeplitz_to_weyl(q, w, tol=opts["tol"])
    doc = {"command": "analyze", **_pipeline_json(report)}
    if opts["oracle"] and report.weyl_exponent is not None:
        doc["oracle"] = _oracle_section_analyze(q, w, report, opts)
        doc["constant_estimate"] = (fmt_complex(report.constant_estimate)
                                    if report.constant_estimate is not None else None)
    return doc, EXIT_OK if report.all_passed else EXIT_GATE_FAILED


def run_compose(job: dict, opts: dict) -> tuple[dict, int]:
    w = _load_weight(job)
    q1, q2 = _load_symbols(job, 2)
    report = calculus.compose_toeplitz(q1, q2, w, tol=opts["tol"])
    doc = {"command": "compose", **_pipeline_json(report)}
    if opts["oracle"] and report.toeplitz_exponent is not None and w.n == 1:
        m, half_width = _grid_options(opts, 64)
        est = oracle.composition_constant(q1, q2, report.toeplitz_exponent, w,
                                          m=m, half_width=half_width)
        report.constant_estimate = est.value
        doc["constant_estimate"] = fmt_complex(est.value)
        doc["oracle"] = {"constant": fmt_complex(est.value),
                         "constant_refinement_error": f"{est.error:.3e}"}
    return doc, EXIT_OK if report.all_passed else EXIT_GATE_FAILED


def run_weyl_to_toeplitz(job: dict, opts: dict) -> tuple[dict, int]:
    w = _load_weight(job)
    try:
        g = forms.holo_from_json(_require(job, "form", "job"))
    except ValueError as exc:
        raise InputError(f"bad form: {exc}") from None
    report = calculus.weyl_to_toeplitz(g, w, tol=opts["tol"])
    doc = {"command": "weyl-to-toeplitz", **_pipeline_json(report)}
    return doc, EXIT_OK if report.all_passed else EXIT_GATE_FAILED


def run_adjoint(job: dict, opts: dict) -> tuple[dict, int]:
    w1 = _load_weight(job)
    w2 = _load_weight(job, "weight2") if "weight2" in job else w1
    kappa = _load_kappa(job)
    adj = symplectic.adjoint_map(kappa, w1, w2)
    pos_fwd = symplectic.positivity(kappa, w1, w2, tol=opts["tol"])
    pos_adj = symplectic.positivity(adj, w2, w1, tol=opts["tol"])
    doc = {
        "command": "adjoint",
        "adjoint_kappa": forms.matrix_to_json(adj.mat),
        "positivity": pos_fwd.status.value,
        "adjoint_positivity": pos_adj.status.value,
    }
    try:
        phase = symplectic.fio_kernel_phase(kappa, w1, w2)
        adj_phase = symplectic.fio_kernel_phase(adj, w2, w1)
        residual = np.linalg.norm(adj_phase.psi.mat - phase.adjoint_phase().mat)
        scale = max(np.linalg.norm(phase.psi.mat), 1e-300)
        doc["kernel_phase"] = forms.holo_to_json(phase.psi)
        doc["kernel_symmetry_residual"] = f"{residual / scale:.3e}"
    except GraphError as exc:
        doc["kernel_phase"] = None
        doc["kernel_phase_note"] = str(exc)
    return doc, EXIT_OK


def run_pushforward(job: dict, opts: dict) -> tuple[dict, int]:
    w = _load_weight(job)
    kappa = _load_kappa(job)
    w1 = symplectic.pushforward_weight(kappa, w, rel_tol=opts["tol"])
    diff = symplectic.weight_difference(w, w1).classify(tol=opts["tol"])
    pos = symplectic.positivity(kappa, w, w1, tol=opts["tol"])
    doc = {
        "command": "pushforward",
        "weight_image": forms.weight_to_json(w1),
        "weight_drop": diff.status.value,
        "positivity": pos.status.value,
    }
    return doc, EXIT_OK


def run_verify(job: dict, opts: dict) -> tuple[dict, int]:
    w = _load_weight(job)
    if w.n != 1:
        raise InputError("verify runs at n = 1 only")
    raw = _require(job, "symbols", "job")
    symbols = [forms.mixed_from_json(entry) for entry in raw]
    target = 1e-5
    doc: dict = {"command": "verify", "checks": []}
    worst = 0.0

    if len(symbols) == 1:
        q = symbols[0]
        report = calculus.toeplitz_to_weyl(q, w, tol=opts["tol"])
        if report.weyl_exponent is None:
            raise InputError("symbol fails the domination bound; nothing to verify")
        m, half_width = _grid_options(opts, 200)
        est = oracle.constant_estimate(report, q, w, m=m, half_width=half_width)
        samples = np.array([0.3, -0.8, 0.5 + 0.5j, -0.2 - 0.6j, 1.0 + 0.1j])
        numeric = oracle.weyl_symbol_numeric(q, w, samples)
        engine = np.array([np.exp(1j * report.weyl_exponent(w.point([x])))
                           for x in samples])
        ratios = numeric / engine
        spread = float(np.max(np.abs(ratios / ratios[0] - 1.0)))
        worst = max(est.error, spread)
        doc["checks"].append({"name": "symbol-transform-constant",
                              "value": fmt_complex(est.value),
                              "refinement_error": f"{est.error:.3e}"})
        doc["checks"].append({"name": "exponent-match-spread",
                              "error": f"{spread:.3e}"})
    elif len(symbols) >= 2:
        q1, q2 = symbols[0], symbols[1]
        report = calculus.compose_toeplitz(q1, q2, w, tol=opts["tol"])
        if report.toeplitz_exponent is None:
            raise InputError("composition produced no symbol exponent to verify")
        m, half_width = _grid_options(opts, 64)
        est = oracle.composition_constant(q1, q2, report.toeplitz_exponent, w,
                                          m=m, half_width=half_width)
        worst = est.error
        doc["checks"].append({"name": "composition-constant",
                              "value": fmt_complex(est.value),
                              "refinement_error": f"{est.error:.3e}"})
    else:
        raise InputError("verify needs one or two symbols")

    doc["verified"] = worst <= target
    doc["target"] = f"{target:.1e}"
    return doc, EXIT_OK if worst <= target else EXIT_NUMERICAL


_RUNNERS = {
    "analyze": run_analyze,
    "compose": run_compose,
    "weyl-to-toeplitz": run_weyl_to_toeplitz,
    "adjoint": run_adjoint,
    "pushforward": run_pushforward,
    "verify": run_verify,
}


def _render_human(doc: dict) -> str:
    lines = [f"command: {doc['command']}"]
    gates = doc.get("gates")
    if gates:
        name_width = max(len(g["name"]) for g in gates)
        lines.append(f"{'gate'.ljust(name_width)}  verdict  margin")
        for g in gates:
            verdict = "pass" if g["passed"] else "FAIL"
            detail = f"  [{g['detail']}]" if g.get("detail") else ""
            lines.append(f"{g['name'].ljust(name_width)}  {verdict:7s}  {g['margin']}{detail}")
    for key, value in doc.items():
        if key in ("command", "gates"):
            continue
        if isinstance(value, dict) and {"B", "C", "D"} <= set(value):
            lines.append(f"{key}:")
            for block in ("B", "C", "D"):
                rows = forms.matrix_from_json(value[block])
                lines.append(f"  {block} = " + "; ".join(
                    " ".join(fmt_complex(z) for z in row) for row in rows))
        elif isinstance(value, dict) and "M" in value:
            rows = forms.matrix_from_json(value["M"])
            lines.append(f"{key}: M = " + "; ".join(
                " ".join(fmt_complex(z) for z in row) for row in rows))
        else:
            lines.append(f"{key}: {json.dumps(value)}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="bargtop",
        description="Gaussian Toeplitz/Weyl symbol calculus: run a JSON job "
                    "and report the full gate trail.")
    parser.add_argument("job", help="path to a JSON job file, or - for stdin")
    parser.add_argument("--json", action="store_true", dest="as_json",
                        help="machine-readable report instead of the table")
    parser.add_argument("--out", help="write the report to this file")
    parser.add_argument("--tol", type=float, help="relative gate tolerance")
    parser.add_argument("--oracle", action="store_true",
                        help="add quadrature cross-checks to the report")
    parser.add_argument("--grid-m", type=int, dest="grid_m",
                        help="quadrature points per axis")
    parser.add_argument("--grid-R", type=float, dest="grid_R",
                        help="quadrature box half-width override")
    args = parser.parse_args(argv)

    try:
        text = sys.stdin.read() if args.job == "-" else open(args.job).read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    try:
        job = json.loads(text)
        if not isinstance(job, dict):
            raise InputError("job must be a JSON object")
        command = _require(job, "command", "job")
        if command not in _COMMANDS:
            raise InputError(f"unknown command {command!r}; expected one of {_COMMANDS}")
        opts = _options(job, args)
        doc, code = _RUNNERS[command](job, opts)
    except (InputError, json.JSONDecodeError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DecayError, DegenerateStationaryPhase, SpectralGateError,
            GraphError, SingularMatrixError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    rendered = (json.dumps(doc, indent=2) + "\n") if args.as_json else _render_human(doc)
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(rendered)
    else:
        sys.stdout.write(rendered)
    return code


if __name__ == "__main__":
    sys.exit(main())
