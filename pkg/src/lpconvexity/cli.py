"""Command-line front end.

Every command is deterministic given its flags and seed, and the data files
it writes are byte-identical across runs: CSV uses '.' decimals at 17
significant digits, JSON is emitted with sorted keys and plain (unquoted)
numbers.  Exit codes are a stable contract: 0 success, 1 usage, 2 domain
(or a failed verification contract), 3 I/O.

The default output directory is the current one; set LPCONVEXITY_OUTDIR to
redirect outputs whose paths are not given explicitly.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from .bellman import envelope_surface, eval_B3
from .boundary import BoundaryParam, gamma, torsion_closed, torsion_numeric_grid
from .domain import (
    ConePoint,
    DomainError,
    Exponent,
    PreconditionError,
    REGIME_ABOVE_TWO,
    REGIME_TWO,
    SectionPoint,
)
from .envelope import surface_to_dict
from .foliation import axis_range, chord_through
from .modulus import modulus_curve
from .oracle import clarkson_suite, hanner_suite

__all__ = ["RunConfig", "main"]

_ENV_OUTDIR = "LPCONVEXITY_OUTDIR"


@dataclass(frozen=True)
class RunConfig:
    """Validated bundle of the flags shared by the export commands."""

    command: str
    p: float
    n: int = 512
    grid: int = 64
    seed: int = 0
    out: str | None = None
    fmt: str = "csv"

    def __post_init__(self) -> None:
        Exponent(self.p)  # range check
        if self.n < 16:
            raise PreconditionError(f"n must be at least 16, got {self.n}")
        if self.grid < 2:
            raise PreconditionError(f"grid must be at least 2, got {self.grid}")
        if self.fmt not in ("csv", "json"):
            raise PreconditionError(f"unrecognized format {self.fmt!r}")


class _Parser(argparse.ArgumentParser):
    """argparse signals usage errors with exit code 2; remap them to 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _resolve_out(path: str | None, default_name: str) -> str:
    if path is not None:
        return path
    return os.path.join(os.environ.get(_ENV_OUTDIR, "."), default_name)


def _dump_json(payload, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=float)
        fh.write("\n")


def _write_rows(path: str, meta: dict, header: list[str], rows, trailer: dict, fmt: str) -> None:
    if fmt == "json":
        payload = dict(meta)
        payload["columns"] = header
        payload["rows"] = [[float(v) for v in row] for row in rows]
        payload.update(trailer)
        _dump_json(payload, path)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
        for key, val in trailer.items():
            fh.write(f"# {key}={_fmt(val)}\n")


def cmd_eval(args) -> int:
    e = Exponent(args.p)
    res = eval_B3(ConePoint(args.x1, args.x2, args.x3), e)
    print(f"{_fmt(res.value)} {res.mode}")
    return 0


def _modulus_rows(e: Exponent, grid: int):
    eps = np.linspace(0.0, 2.0, grid + 1)[1:]
    curve = modulus_curve(e, eps)
    rows = [
        (closed.eps, closed.delta, pipeline.delta, abs(closed.delta - pipeline.delta))
        for closed, pipeline in curve.points
    ]
    return rows, curve.max_discrepancy


def cmd_modulus_curve(args) -> int:
    cfg = RunConfig("modulus-curve", args.p, grid=args.grid, out=args.out, fmt=args.format)
    e = Exponent(cfg.p)
    e.require_eval_range()
    rows, max_disc = _modulus_rows(e, cfg.grid)
    out = _resolve_out(cfg.out, "modulus.csv" if cfg.fmt == "csv" else "modulus.json")
    meta = {"command": "modulus-curve", "p": _fmt(cfg.p), "grid": cfg.grid}
    _write_rows(
        out,
        meta,
        ["eps", "delta_closed", "delta_bellman", "discrepancy"],
        rows,
        {"max_discrepancy": max_disc},
        cfg.fmt,
    )
    if args.plot:
        from .plots import save_modulus_figure

        arr = np.asarray(rows)
        save_modulus_figure(arr[:, 0], arr[:, 1], cfg.p, os.path.splitext(out)[0] + ".png")
    print(f"max discrepancy {_fmt(max_disc)} over {len(rows)} points -> {out}")
    return 0


def cmd_verify(args) -> int:
    results = []
    all_ok = True
    for p in args.p:
        e = Exponent(p)
        hanner = hanner_suite(e, args.trials, args.seed)
        entry: dict = {"p": float(p), "hanner": hanner}
        ok = hanner["passed"]
        if p <= 1.0:
            entry["clarkson"] = {
                "skipped": True,
                "notice": "conjugate-power form requires p > 1",
            }
        else:
            clarkson = clarkson_suite(e, args.trials, args.seed)
            entry["clarkson"] = clarkson
            ok = ok and clarkson["passed"]
        results.append(entry)
        all_ok = all_ok and ok
        clarkson_state = "skipped" if p <= 1.0 else ("ok" if entry["clarkson"]["passed"] else "FAILED")
        print(f"p={p:g}: hanner={'ok' if hanner['passed'] else 'FAILED'} clarkson={clarkson_state}")
    report = {
        "command": "verify",
        "trials": int(args.trials),
        "seed": int(args.seed),
        "results": results,
        "passed": all_ok,
    }
    out = _resolve_out(args.out, "verify.json")
    _dump_json(report, out)
    print(("all contracts hold" if all_ok else "contract violation detected") + f" -> {out}")
    return 0 if all_ok else 2


def _chord_row(t: float, e: Exponent):
    ch = chord_through(SectionPoint(t, t), e)
    (end_a, end_b) = ch.endpoints
    return (t, float(end_a.arc), end_a.s, float(end_b.arc), end_b.s, ch.value_at_axis), ch


def cmd_foliate(args) -> int:
    cfg = RunConfig("foliate", args.p, grid=max(args.count, 2), out=args.out, fmt=args.format)
    e = Exponent(cfg.p)
    if e.regime == REGIME_TWO:
        print("linear regime: the graph is planar and carries no chord foliation", file=sys.stderr)
        return 2
    e.require_eval_range()
    tmin, tmax = axis_range(e)
    if e.regime == REGIME_ABOVE_TWO:
        ts = [0.5 * (tmin + tmax)]
        print(
            "note: above the quadratic exponent only the symmetry-axis chord is known; emitting it alone",
            file=sys.stderr,
        )
    else:
        ts = list(np.linspace(tmin, tmax, args.count + 2)[1:-1])
    rows = []
    chords = []
    for t in ts:
        row, ch = _chord_row(float(t), e)
        rows.append(row)
        chords.append(ch)
    out = _resolve_out(cfg.out, "foliation.csv" if cfg.fmt == "csv" else "foliation.json")
    meta = {"command": "foliate", "p": _fmt(cfg.p), "count": len(rows)}
    _write_rows(out, meta, ["t", "arc_a", "s_a", "arc_b", "s_b", "value"], rows, {}, cfg.fmt)
    if args.plot:
        from .plots import save_foliation_figure

        payload = []
        for ch in chords:
            ga = gamma(ch.endpoints[0], e)
            gb = gamma(ch.endpoints[1], e)
            payload.append({"end1": (ga.y1, ga.y2), "end2": (gb.y1, gb.y2)})
        save_foliation_figure(payload, e, os.path.splitext(out)[0] + ".png")
    print(f"{len(rows)} chords -> {out}")
    return 0


def cmd_surface(args) -> int:
    cfg = RunConfig("surface", args.p, n=args.n, out=args.out, fmt="json")
    e = Exponent(cfg.p)
    e.require_eval_range()
    surf = envelope_surface(e, cfg.n)
    payload = surface_to_dict(surf)
    payload["command"] = "surface"
    payload["p"] = float(cfg.p)
    payload["n"] = int(cfg.n)
    out = _resolve_out(cfg.out, "surface.json")
    _dump_json(payload, out)
    if args.plot:
        from .plots import save_surface_figure

        save_surface_figure(surf.vertices, e, os.path.splitext(out)[0] + ".png")
    print(f"{len(surf.vertices)} vertices, {len(surf.facets)} facets -> {out}")
    return 0


_TORSION_H = 1e-3


def _torsion_rows(e: Exponent, n: int):
    s_all = (np.arange(n) + 0.5) / n
    margin = 3.0 * _TORSION_H
    rows = []
    by_arc: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    for arc in (1, 2, 3):
        keep = (s_all > margin) & (s_all < 1.0 - margin)
        if arc == 3:
            keep &= np.abs(s_all - 0.5) >= margin
        s = s_all[keep]
        closed = np.array([torsion_closed(BoundaryParam(arc, float(v)), e).value for v in s])
        numeric = torsion_numeric_grid(arc, s, e, h=_TORSION_H)
        by_arc[arc] = (s, closed)
        for sv, cv, nv in zip(s, closed, numeric):
            if cv == 0.0:
                match = abs(nv) <= 1e-4
            else:
                match = np.sign(nv) == np.sign(cv)
            rows.append((float(arc), float(sv), float(cv), float(nv), float(bool(match))))
    return rows, by_arc


def cmd_torsion(args) -> int:
    cfg = RunConfig("torsion", args.p, grid=args.n, out=args.out, fmt=args.format)
    e = Exponent(cfg.p)
    rows, by_arc = _torsion_rows(e, args.n)
    out = _resolve_out(cfg.out, "torsion.csv" if cfg.fmt == "csv" else "torsion.json")
    meta = {"command": "torsion", "p": _fmt(cfg.p), "n": args.n}
    _write_rows(out, meta, ["arc", "s", "closed", "numeric", "sign_match"], rows, {}, cfg.fmt)
    if args.plot:
        from .plots import save_torsion_figure

        s_ref = by_arc[1][0]
        save_torsion_figure(
            s_ref,
            {arc: vals for arc, (_, vals) in by_arc.items() if len(vals) == len(s_ref)},
            cfg.p,
            os.path.splitext(out)[0] + ".png",
        )
    mismatches = sum(1 for row in rows if row[4] == 0.0)
    print(f"{len(rows)} rows, {mismatches} sign mismatches -> {out}")
    return 0


def cmd_report(args) -> int:
    e = Exponent(args.p)
    e.require_eval_range()
    outdir = args.out or os.environ.get(_ENV_OUTDIR, ".")
    os.makedirs(outdir, exist_ok=True)
    from .plots import (
        save_foliation_figure,
        save_modulus_figure,
        save_surface_figure,
        save_torsion_figure,
    )

    summary: dict = {"command": "report", "p": float(args.p), "files": [], "notes": []}

    def _record(name: str) -> str:
        summary["files"].append(name)
        return os.path.join(outdir, name)

    # Modulus curve.
    rows, max_disc = _modulus_rows(e, args.grid)
    _write_rows(
        _record("modulus.csv"),
        {"command": "modulus-curve", "p": _fmt(args.p), "grid": args.grid},
        ["eps", "delta_closed", "delta_bellman", "discrepancy"],
        rows,
        {"max_discrepancy": max_disc},
        "csv",
    )
    arr = np.asarray(rows)
    save_modulus_figure(arr[:, 0], arr[:, 1], args.p, _record("modulus.png"))
    summary["max_modulus_discrepancy"] = float(max_disc)
    print(f"modulus: max discrepancy {_fmt(max_disc)}")

    # Torsion table.
    trows, by_arc = _torsion_rows(e, args.n)
    _write_rows(
        _record("torsion.csv"),
        {"command": "torsion", "p": _fmt(args.p), "n": args.n},
        ["arc", "s", "closed", "numeric", "sign_match"],
        trows,
        {},
        "csv",
    )
    s_ref = by_arc[1][0]
    save_torsion_figure(
        s_ref,
        {arc: vals for arc, (_, vals) in by_arc.items() if len(vals) == len(s_ref)},
        args.p,
        _record("torsion.png"),
    )
    t_mis = sum(1 for row in trows if row[4] == 0.0)
    summary["torsion_sign_mismatches"] = t_mis
    print(f"torsion: {t_mis} sign mismatches over {len(trows)} rows")

    # Foliation (skipped in the linear regime).
    if e.regime == REGIME_TWO:
        summary["notes"].append("foliation skipped: linear regime")
        print("foliation: skipped (linear regime)")
    else:
        tmin, tmax = axis_range(e)
        if e.regime == REGIME_ABOVE_TWO:
            ts = [0.5 * (tmin + tmax)]
            summary["notes"].append("foliation limited to the symmetry-axis chord above the quadratic exponent")
        else:
            ts = list(np.linspace(tmin, tmax, args.count + 2)[1:-1])
        frows = []
        chords = []
        for t in ts:
            row, ch = _chord_row(float(t), e)
            frows.append(row)
            chords.append(ch)
        _write_rows(
            _record("foliation.csv"),
            {"command": "foliate", "p": _fmt(args.p), "count": len(frows)},
            ["t", "arc_a", "s_a", "arc_b", "s_b", "value"],
            frows,
            {},
            "csv",
        )
        payload = []
        for ch in chords:
            ga = gamma(ch.endpoints[0], e)
            gb = gamma(ch.endpoints[1], e)
            payload.append({"end1": (ga.y1, ga.y2), "end2": (gb.y1, gb.y2)})
        save_foliation_figure(payload, e, _record("foliation.png"))
        print(f"foliation: {len(frows)} chords")

    # Hull surface.
    surf = envelope_surface(e, args.n_surface)
    spayload = surface_to_dict(surf)
    spayload["command"] = "surface"
    spayload["p"] = float(args.p)
    spayload["n"] = int(args.n_surface)
    _dump_json(spayload, _record("surface.json"))
    save_surface_figure(surf.vertices, e, _record("surface.png"))
    print(f"surface: {len(surf.vertices)} vertices, {len(surf.facets)} facets")

    # Verification suites.
    hanner = hanner_suite(e, args.trials, args.seed)
    entry: dict = {"p": float(args.p), "hanner": hanner}
    ok = hanner["passed"]
    if args.p <= 1.0:
        entry["clarkson"] = {"skipped": True, "notice": "conjugate-power form requires p > 1"}
    else:
        clarkson = clarkson_suite(e, args.trials, args.seed)
        entry["clarkson"] = clarkson
        ok = ok and clarkson["passed"]
    _dump_json(
        {"command": "verify", "trials": int(args.trials), "seed": int(args.seed), "results": [entry], "passed": ok},
        _record("verify.json"),
    )
    summary["verify_passed"] = ok
    print(f"verify: {'ok' if ok else 'FAILED'}")

    _dump_json(summary, os.path.join(outdir, "summary.json"))
    summary_rel = os.path.join(outdir, "summary.json")
    print(f"report bundle -> {summary_rel}")
    return 0 if ok else 2


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lpconvexity", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    pe = sub.add_parser("eval", help="evaluate the extremal value at one cone point")
    pe.add_argument("--p", type=float, required=True)
    pe.add_argument("x1", type=float)
    pe.add_argument("x2", type=float)
    pe.add_argument("x3", type=float)
    pe.set_defaults(func=cmd_eval)

    pm = sub.add_parser("modulus-curve", help="export the modulus curve cross-validated two ways")
    pm.add_argument("--p", type=float, required=True)
    pm.add_argument("--grid", type=int, default=64)
    pm.add_argument("--out", default=None)
    pm.add_argument("--format", choices=("csv", "json"), default="csv")
    pm.add_argument("--plot", action="store_true")
    pm.set_defaults(func=cmd_modulus_curve)

    pv = sub.add_parser("verify", help="run the inequality suites and write a JSON report")
    pv.add_argument("--p", type=float, nargs="+", default=[1.5, 2.0, 3.0])
    pv.add_argument("--trials", type=int, default=100_000)
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--out", default=None)
    pv.set_defaults(func=cmd_verify)

    pf = sub.add_parser("foliate", help="export the chord foliation of the section")
    pf.add_argument("--p", type=float, required=True)
    pf.add_argument("--count", type=int, default=50)
    pf.add_argument("--out", default=None)
    pf.add_argument("--format", choices=("csv", "json"), default="csv")
    pf.add_argument("--plot", action="store_true")
    pf.set_defaults(func=cmd_foliate)

    ps = sub.add_parser("surface", help="export the hull surface as JSON")
    ps.add_argument("--p", type=float, required=True)
    ps.add_argument("--n", type=int, default=512)
    ps.add_argument("--out", default=None)
    ps.add_argument("--plot", action="store_true")
    ps.set_defaults(func=cmd_surface)

    pt = sub.add_parser("torsion", help="export closed-form and stencil torsion per arc")
    pt.add_argument("--p", type=float, required=True)
    pt.add_argument("--n", type=int, default=50)
    pt.add_argument("--out", default=None)
    pt.add_argument("--format", choices=("csv", "json"), default="csv")
    pt.add_argument("--plot", action="store_true")
    pt.set_defaults(func=cmd_torsion)

    pr = sub.add_parser("report", help="write the full data + figure bundle for one exponent")
    pr.add_argument("--p", type=float, required=True)
    pr.add_argument("--out", default=None, help="output directory (default: current or LPCONVEXITY_OUTDIR)")
    pr.add_argument("--grid", type=int, default=32)
    pr.add_argument("--n", type=int, default=50, help="torsion grid")
    pr.add_argument("--count", type=int, default=25, help="foliation chords")
    pr.add_argument("--n-surface", type=int, default=512, help="boundary samples per arc")
    pr.add_argument("--trials", type=int, default=20_000)
    pr.add_argument("--seed", type=int, default=0)
    pr.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (DomainError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
