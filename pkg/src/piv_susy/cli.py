"""Command-line front end: P_IV solution data, verification, scans, spectra.

Exit codes: 0 success, 1 usage or file error, 2 singular transformation or
extremal state, 3 verification failure.  One JSON summary line is always
printed to standard output.

Example:
    piv-susy solve --k 1 --eps1 -0.5 --nu 0.7 --family 1 --output g.csv
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from fractions import Fraction
from importlib import metadata

import numpy as np

from . import config
from .errors import DegenerateG, PivSusyError, SingularPoint
from .painleve import _residual, g_solution, parameter_space_scan
from .pha_ladder import degenerate_report_for_spec, pha_checks, spectrum
from .seed_solutions import SeedSpec
from .susy_transform import Family, extremal_state, mapped_eigenfunction, new_level_eigenfunction

EXIT_OK, EXIT_USAGE, EXIT_SINGULAR, EXIT_VERIFY = 0, 1, 2, 3
SOLVE_COLUMNS = ["x", "re_g", "im_g", "re_residual", "im_residual", "abs_psi"]
COMMANDS = ["solve", "verify", "scan", "spectrum", "eigenfunction", "ladder-check"]


class UsageError(Exception):
    pass


class VerificationFailed(Exception):
    def __init__(self, message, details):
        super().__init__(message)
        self.details = details


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- formatting -------------------------------------------------------------


def fmt(v) -> str:
    """17 significant digits; nan/inf spelled as Python does."""
    return format(float(v), ".17g")


def _json_number(v):
    v = float(v)
    return v if math.isfinite(v) else None


def write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_csv(path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    write_text(path, buf.getvalue())


def write_json(path, payload):
    write_text(path, json.dumps(payload, sort_keys=True, indent=1, allow_nan=False) + "\n")


def _meta():
    try:
        version = metadata.version("artifact")
    except metadata.PackageNotFoundError:
        version = "unknown"
    return {"generated_at": datetime.now(timezone.utc).isoformat(), "version": version}


def summary(payload):
    print(json.dumps(payload, sort_keys=True, allow_nan=False, default=str))


# -- argument handling ----------------------------------------------------------


def _add_spec_args(p, required=True):
    p.add_argument("--k", type=int, default=1, help="transformation order")
    p.add_argument("--eps1", type=float, required=required, help="factorization energy epsilon_1")
    p.add_argument("--nu", type=float, help="real-case parameter (excludes --lambda/--kappa)")
    p.add_argument("--lambda", dest="lam", type=float, help="real part of the seed constant")
    p.add_argument("--kappa", type=float, help="imaginary part of the seed constant")


def _add_grid_args(p, xmin=-5.0, xmax=5.0, samples=1001):
    p.add_argument("--xmin", type=float, default=xmin)
    p.add_argument("--xmax", type=float, default=xmax)
    p.add_argument("--samples", type=int, default=samples)


def _add_output_args(p, required=True):
    p.add_argument("--output", required=required, help="output file")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--no-meta", action="store_true", help="omit the (timestamped) metadata block from JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="piv-susy", description="Painleve IV solutions from complex SUSY partners of the oscillator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="sample g, its P_IV residual and |psi| on a grid")
    _add_spec_args(p)
    p.add_argument("--family", type=int, choices=[1, 2, 3], default=1)
    _add_grid_args(p)
    p.add_argument("--tolerance", type=float, default=1e-6, help="max residual accepted (exit 3 above)")
    _add_output_args(p)

    p = sub.add_parser("verify", help="re-check a solve output file")
    p.add_argument("input", help="CSV or JSON written by solve")
    _add_spec_args(p, required=False)
    p.add_argument("--family", type=int, choices=[1, 2, 3])
    p.add_argument("--tolerance", type=float, default=1e-6)

    p = sub.add_parser("scan", help="(a, b) curves of the solution families")
    p.add_argument("--families", default="all", help="'all' or a comma list such as 1,3")
    p.add_argument("--eps1-range", default="-3:8:0.05", help="start:stop:step, inclusive")
    p.add_argument("--k-range", default="1:3", help="kmin:kmax, inclusive")
    _add_output_args(p)

    p = sub.add_parser("spectrum", help="finite and infinite ladders of H_k")
    _add_spec_args(p)
    p.add_argument("--levels", type=int, default=10, help="infinite-ladder levels to list")
    _add_output_args(p)

    p = sub.add_parser("eigenfunction", help="sample an eigenfunction of H_k")
    _add_spec_args(p)
    p.add_argument("--kind", choices=["mapped", "new-level", "extremal"], default="mapped")
    p.add_argument("--index", type=int, default=0, help="n (mapped), j (new-level) or family (extremal)")
    _add_grid_args(p)
    _add_output_args(p)

    p = sub.add_parser("ladder-check", help="numeric certificates of the ladder algebra")
    _add_spec_args(p)
    _add_grid_args(p, -6.0, 6.0, 601)
    p.add_argument("--tolerance", type=float, default=1e-4)
    p.add_argument("--max-level", type=int, default=4, help="highest mapped level in the basket")
    p.add_argument("--output", help="optional JSON report")
    return parser


def spec_from_args(args) -> SeedSpec:
    if args.eps1 is None:
        raise UsageError("--eps1 is required")
    if args.nu is not None and (args.lam is not None or args.kappa is not None):
        raise UsageError("--nu and --lambda/--kappa are mutually exclusive")
    if args.k < 1 or args.k > config.MAX_ORDER_K:
        raise UsageError(f"--k must be in 1..{config.MAX_ORDER_K}")
    if args.nu is not None:
        return SeedSpec.from_nu(args.eps1, args.nu, args.k)
    return SeedSpec(epsilon1=args.eps1, lam=args.lam or 0.0, kappa=args.kappa or 0.0, k=args.k)


def grid_from_args(args) -> np.ndarray:
    if not args.xmin < args.xmax:
        raise UsageError("--xmin must be smaller than --xmax")
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    return np.linspace(args.xmin, args.xmax, args.samples)


def _check_tolerance(args):
    if not args.tolerance > 0:
        raise UsageError("--tolerance must be positive")


def threads() -> int:
    raw = os.environ.get("PIV_SUSY_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise UsageError("PIV_SUSY_THREADS must be a positive integer") from exc
    if n < 1:
        raise UsageError("PIV_SUSY_THREADS must be a positive integer")
    return n


def _spec_dict(spec: SeedSpec):
    return {"epsilon1": spec.epsilon1, "k": spec.k, "lambda": spec.lam, "kappa": spec.kappa}


def _solve(spec, family, x):
    workers = threads()
    if workers == 1:
        return g_solution(spec, family, x)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return g_solution(spec, family, x, chunks=workers, map_fn=pool.map)


# -- commands ------------------------------------------------------------------


def cmd_solve(args):
    _check_tolerance(args)
    spec, x = spec_from_args(args), grid_from_args(args)
    sample = _solve(spec, args.family, x)
    res = sample.residual
    rows = [
        [fmt(xi), fmt(g.real), fmt(g.imag), fmt(r.real), fmt(r.imag), fmt(p)]
        for xi, g, r, p in zip(sample.x, sample.g, res, sample.psi_abs)
    ]
    params = {
        "spec": _spec_dict(spec),
        "family": int(args.family),
        "a": float(sample.params.a),
        "b": float(sample.params.b),
    }
    if args.format == "csv":
        write_csv(args.output, SOLVE_COLUMNS, rows)
    else:
        payload = {
            "columns": SOLVE_COLUMNS,
            "params": params,
            "rows": [[_json_number(float(v)) for v in row] for row in rows],
        }
        if not args.no_meta:
            payload["meta"] = _meta()
        write_json(args.output, payload)
    max_res = float(np.nanmax(np.abs(res)))
    out = {"output": args.output, "rows": len(rows), "max_residual": max_res, "a": params["a"], "b": params["b"]}
    if not max_res < args.tolerance:
        raise VerificationFailed(f"max residual {max_res:.3e} exceeds tolerance {args.tolerance:g}", out)
    return out


def read_solution(path):
    """(x, g, params-or-None) from a solve output file."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".json") or text.lstrip().startswith("{"):
        data = json.loads(text)
        cols = data["columns"]
        rows = np.array([[np.nan if v is None else v for v in r] for r in data["rows"]], dtype=float)
        params = data.get("params")
    else:
        reader = csv.reader(io.StringIO(text))
        cols = next(reader)
        rows = np.array([[float(v) for v in r] for r in reader if r], dtype=float)
        params = None
    if cols != SOLVE_COLUMNS:
        raise UsageError(f"unexpected columns {cols}")
    if rows.ndim != 2 or len(rows) == 0:
        raise UsageError("no data rows")
    return rows[:, 0], rows[:, 1] + 1j * rows[:, 2], params


def cmd_verify(args):
    _check_tolerance(args)
    x, g_file, params = read_solution(args.input)
    if args.eps1 is not None:
        spec = spec_from_args(args)
    elif params is not None:
        s = params["spec"]
        spec = SeedSpec(epsilon1=s["epsilon1"], lam=s["lambda"], kappa=s["kappa"], k=s["k"])
    else:
        raise UsageError("CSV input needs the seed flags (--eps1 ...)")
    family = args.family or (params or {}).get("family")
    if family is None:
        raise UsageError("--family is required for CSV input")
    sample = _solve(spec, family, x)
    # residual of the stored g with the regenerated exact derivatives, and
    # the pointwise agreement of the stored g itself
    res = _residual(x, g_file, sample.g1, sample.g2, sample.params.a, sample.params.b, config.DEGENERATE_G_TOL)
    max_res = float(np.nanmax(np.abs(res)))
    dev = float(np.max(np.abs(g_file - sample.g) / np.maximum(1.0, np.abs(sample.g))))
    out = {"input": args.input, "rows": int(len(x)), "max_residual": max_res, "max_g_deviation": dev}
    if not (max_res < args.tolerance and dev < args.tolerance):
        raise VerificationFailed("stored solution fails verification", out)
    return out


def _parse_families(text):
    if text == "all":
        return [1, 2, 3]
    try:
        fams = [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise UsageError("--families must be 'all' or a comma list of 1, 2, 3") from exc
    if not fams or any(f not in (1, 2, 3) for f in fams):
        raise UsageError("--families must be 'all' or a comma list of 1, 2, 3")
    return fams


def _parse_range(text, parts, name, kind=Fraction):
    try:
        vals = [kind(t) for t in text.split(":")]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"{name} must look like {':'.join('abc'[:parts])}") from exc
    if len(vals) != parts:
        raise UsageError(f"{name} must look like {':'.join('abc'[:parts])}")
    return vals


def cmd_scan(args):
    fams = _parse_families(args.families)
    start, stop, step = _parse_range(args.eps1_range, 3, "--eps1-range")
    kmin, kmax = _parse_range(args.k_range, 2, "--k-range", int)
    if step <= 0 or stop < start:
        raise UsageError("--eps1-range needs start <= stop and a positive step")
    if kmin < 1 or kmax < kmin:
        raise UsageError("--k-range needs 1 <= kmin <= kmax")
    points = parameter_space_scan((start, stop, step), (kmin, kmax), fams)
    header = ["family", "k", "eps1", "a", "b", "classification"]
    rows = [[int(p.family), p.k, fmt(p.epsilon1), fmt(p.a), fmt(p.b), p.classification] for p in points]
    if args.format == "csv":
        write_csv(args.output, header, rows)
    else:
        payload = {
            "points": [
                {"family": int(p.family), "k": p.k, "eps1": float(p.epsilon1), "a": float(p.a), "b": float(p.b),
                 "classification": p.classification}
                for p in points
            ],
        }
        if not args.no_meta:
            payload["meta"] = _meta()
        write_json(args.output, payload)
    return {"output": args.output, "points": len(points)}


def cmd_spectrum(args):
    spec = spec_from_args(args)
    if args.levels < 0:
        raise UsageError("--levels must be non-negative")
    d = spectrum(spec)
    levels = d.infinite_levels(args.levels)
    if args.format == "csv":
        rows = [["finite", i, fmt(e)] for i, e in enumerate(d.finite_ladder)]
        rows += [["infinite", n, fmt(e)] for n, e in enumerate(levels)]
        write_csv(args.output, ["ladder", "index", "energy"], rows)
    else:
        payload = {
            "infinite_ladder_base": d.infinite_ladder_base,
            "finite_ladder": d.finite_ladder,
            "degenerate_overlap": d.degenerate_overlap,
            "infinite_levels": levels,
            "spec": _spec_dict(spec),
        }
        if not args.no_meta:
            payload["meta"] = _meta()
        write_json(args.output, payload)
    return {"output": args.output, "finite_ladder": d.finite_ladder, "degenerate_overlap": d.degenerate_overlap}


def cmd_eigenfunction(args):
    spec, x = spec_from_args(args), grid_from_args(args)
    if args.kind == "mapped":
        if args.index < 0:
            raise UsageError("--index must be non-negative for mapped states")
        state, energy = mapped_eigenfunction(spec, args.index, x), args.index + 0.5
    elif args.kind == "new-level":
        if not 1 <= args.index <= spec.k:
            raise UsageError(f"--index must be in 1..{spec.k} for new-level states")
        state, energy = new_level_eigenfunction(spec, args.index, x), spec.epsilon1 - (args.index - 1)
    else:
        if args.index not in (1, 2, 3):
            raise UsageError("--index must be 1, 2 or 3 for extremal states")
        state = extremal_state(spec, Family(args.index), x)
        energy = state.energy
    header = ["x", "re_psi", "im_psi", "abs_psi"]
    rows = [[fmt(xi), fmt(v.real), fmt(v.imag), fmt(abs(v))] for xi, v in zip(state.x, state.values)]
    if args.format == "csv":
        write_csv(args.output, header, rows)
    else:
        payload = {
            "columns": header,
            "energy": energy,
            "kind": args.kind,
            "index": args.index,
            "spec": _spec_dict(spec),
            "rows": [[_json_number(float(v)) for v in r] for r in rows],
        }
        if not args.no_meta:
            payload["meta"] = _meta()
        write_json(args.output, payload)
    return {"output": args.output, "rows": len(rows), "energy": energy}


def cmd_ladder_check(args):
    _check_tolerance(args)
    spec, x = spec_from_args(args), grid_from_args(args)
    out = {}
    if spectrum(spec).degenerate_overlap is not None and spec.k == 1 and spec.kappa != 0:
        rep = degenerate_report_for_spec(spec, x)
        out["degenerate"] = [
            {"name": a.name, "kind": a.kind, "value": a.value, "threshold": a.threshold, "passed": a.passed}
            for a in rep.assertions
        ]
        ok = rep.passed
    else:
        rep = pha_checks(spec, x, n_max=args.max_level)
        out.update(
            commutator=rep.commutator_deviation,
            commutator_exact=rep.commutator_exact_deviation,
            q_deviation=rep.q_deviation,
            separation=rep.separation,
            q_roots=list(rep.q.roots),
            p_values={fmt(e): v for e, v in sorted(rep.p_values.items())},
        )
        ok = max(rep.commutator_deviation, rep.q_deviation, rep.separation) < args.tolerance
    if args.output:
        write_json(args.output, dict(out, spec=_spec_dict(spec)))
    out["output"] = args.output
    if not ok:
        raise VerificationFailed("ladder algebra check failed", out)
    return out


HANDLERS = {
    "solve": cmd_solve,
    "verify": cmd_verify,
    "scan": cmd_scan,
    "spectrum": cmd_spectrum,
    "eigenfunction": cmd_eigenfunction,
    "ladder-check": cmd_ladder_check,
}


_RANGE_OPTIONS = ("--eps1-range", "--k-range")


def _join_range_values(argv):
    """argparse reads "-3:8:0.05" as an option; glue such values to their flag."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _RANGE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    command = None
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_join_range_values(argv))
        command = args.command
        details = HANDLERS[command](args)
        summary({"command": command, "status": "ok", "exit_code": EXIT_OK, **details})
        return EXIT_OK
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        summary({"command": command, "status": "usage-error", "exit_code": EXIT_USAGE, "message": str(exc)})
        return EXIT_USAGE
    except (SingularPoint, DegenerateG) as exc:
        summary({"command": command, "status": "singular", "exit_code": EXIT_SINGULAR, "message": str(exc)})
        return EXIT_SINGULAR
    except VerificationFailed as exc:
        summary({"command": command, "status": "verification-failed", "exit_code": EXIT_VERIFY,
                 "message": str(exc), **exc.details})
        return EXIT_VERIFY
    except (OSError, PivSusyError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        summary({"command": command, "status": "error", "exit_code": EXIT_USAGE, "message": str(exc)})
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
