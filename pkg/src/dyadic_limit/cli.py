"""Command-line front end.

Exit codes: 0 ok, 1 usage error, 2 numerical precondition violated,
3 size limit exceeded, 4 I/O failure. JSON outputs embed a run manifest;
CSV files written with ``--out`` get a ``<out>.manifest.json`` sidecar.
Set ``SOURCE_DATE_EPOCH`` to pin the manifest timestamp.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from . import diagnostics as diag
from . import serialize as ser
from .dyadic import parse_dyadic
from .ensembles import (
    EnsembleConfig,
    genericity_scan,
    pauli_stabilizer_isometry,
    scan_summary,
    so3_isometry,
)
from .errors import DyadicOverflowError, PreconditionError, SizeLimitError
from .linalg import Isometry, Tolerances, haar_isometry
from .thompson import (
    ThompsonElement,
    circle_distance_to_identity,
    compose,
    evaluate,
    inverse,
    rotation,
)
from .ttn import rotation_matrix_element


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _manifest(argv: list[str], config: dict, seeds: list[int]) -> dict:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    when = (datetime.fromtimestamp(int(epoch), timezone.utc) if epoch
            else datetime.now(timezone.utc))
    return {
        "command": list(argv),
        "config": config,
        "version": __version__,
        "timestamp": when.isoformat(),
        "seeds": seeds,
    }


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IOError(f"cannot write {out}: {exc}") from exc


def _emit_json(payload: dict, out: str | None) -> None:
    ser.validate(payload, "output")
    _write(json.dumps(payload, indent=2, sort_keys=True) + "\n", out)


def emit_plot_data(header: list[str], rows: list[list], path: str | None,
                   manifest: dict | None = None) -> None:
    """CSV with a header row; ``path=None`` writes to stdout."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) if isinstance(v, float) else v for v in row])
    _write(buf.getvalue(), path)
    if path is not None and manifest is not None:
        _write(json.dumps(manifest, indent=2, sort_keys=True) + "\n", path + ".manifest.json")


def _tolerances(args) -> Tolerances:
    if getattr(args, "tol", None) is None:
        return Tolerances()
    return Tolerances(eigen_one=args.tol, condition=args.tol)


def _isometry(args) -> tuple[Isometry, str, list[int]]:
    if getattr(args, "isometry", None):
        try:
            text = Path(args.isometry).read_text(encoding="utf-8")
        except OSError as exc:
            raise IOError(f"cannot read {args.isometry}: {exc}") from exc
        return ser.isometry_from_json(json.loads(text)), f"file:{args.isometry}", []
    if args.d is None or args.seed is None:
        raise UsageError("give --d and --seed, or --isometry FILE")
    return haar_isometry(args.d, args.seed), f"haar:d={args.d}:seed={args.seed}", [args.seed]


def _state(text: str | None, d: int) -> np.ndarray:
    if text is None:
        e = np.zeros(d, dtype=complex)
        e[0] = 1.0
        return e
    try:
        items = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"state is not JSON: {exc}") from exc
    v = np.array([complex(*z) if isinstance(z, list) else complex(z) for z in items])
    if v.size != d:
        raise PreconditionError(f"state has dimension {v.size}, expected {d}")
    return v


def _config(args) -> dict:
    skip = {"func", "verb", "example"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None} | (
        {"verb": args.verb} if getattr(args, "verb", None) else {}) | (
        {"example": args.example} if getattr(args, "example", None) else {})


def cmd_sample(args, argv):
    V, _, seeds = _isometry(args)
    _emit_json({"manifest": _manifest(argv, _config(args), seeds),
                "isometry": ser.isometry_to_json(V)}, args.out)


def cmd_check(args, argv):
    V, source, seeds = _isometry(args)
    rep = diag.diagnose(V, source, kmax=args.kmax, tol=_tolerances(args))
    _emit_json({"manifest": _manifest(argv, _config(args), seeds), "report": rep.to_dict()}, args.out)


def cmd_decay(args, argv):
    V, _, seeds = _isometry(args)
    series = diag.decay_series(V, args.kmax, _tolerances(args))
    rows = [[k, n, b] for k, (n, b) in enumerate(zip(series.norms, series.bounds()))]
    emit_plot_data(["k", "norm", "bound"], rows, args.out, _manifest(argv, _config(args), seeds))


def cmd_melement(args, argv):
    V, _, seeds = _isometry(args)
    phi, psi = _state(args.phi, V.d), _state(args.psi, V.d)
    tol = _tolerances(args)
    bounds = diag.hoelder_bounds(V, phi, psi, args.kmax, args.direction, tol)
    transfer = diag.transfer_series(V, phi, psi, args.kmax, args.direction, tol)
    rows = []
    for k in range(1, args.kmax + 1):
        t = transfer[k - 1]
        if args.mode == "transfer":
            rows.append([k, t.real, t.imag, abs(t), bounds[k - 1]])
            continue
        m = rotation_matrix_element(V, phi, psi, k, args.direction)
        if args.mode == "direct":
            rows.append([k, m.real, m.imag, abs(m), bounds[k - 1]])
        else:
            rows.append([k, t.real, t.imag, abs(t), bounds[k - 1], m.real, m.imag, abs(t - m)])
    header = ["k", "re", "im", "abs", "hoelder_bound"]
    if args.mode == "both":
        header += ["direct_re", "direct_im", "abs_diff"]
    emit_plot_data(header, rows, args.out, _manifest(argv, _config(args), seeds))


def cmd_scan(args, argv):
    cfg = EnsembleConfig(args.d, args.samples, args.seed, args.kmax, _tolerances(args))
    reports = genericity_scan(cfg)
    manifest = _manifest(argv, _config(args), cfg.seeds)
    _emit_json({"manifest": manifest, "summary": scan_summary(reports),
                "reports": [r.to_dict() for r in reports]}, args.out)
    if args.out is not None:
        rows = [[seed, r.norm_x, r.norm_gamma, r.genericity_det, str(r.condition_holds).lower()]
                for seed, r in zip(cfg.seeds, reports)]
        emit_plot_data(["seed", "norm_x", "norm_gamma", "det", "condition"], rows,
                       str(Path(args.out).with_suffix(".csv")))


def cmd_example(args, argv):
    if args.example == "so3":
        V, source = so3_isometry(), "so3"
    else:
        if args.d is None:
            raise UsageError("example stabilizer needs --d")
        V, source = pauli_stabilizer_isometry(args.d), f"stabilizer:d={args.d}"
    rep = diag.diagnose(V, source, kmax=args.kmax, tol=_tolerances(args))
    _emit_json({"manifest": _manifest(argv, _config(args), []), "report": rep.to_dict(),
                "certificate": rep.certificate}, args.out)


def _element(text: str | None) -> ThompsonElement:
    if text is None:
        raise UsageError("missing Thompson element")
    if text == "identity":
        return ThompsonElement.identity()
    if text.startswith("rotation:"):
        return rotation(int(text.split(":", 1)[1]))
    if text.startswith("@"):
        try:
            text = Path(text[1:]).read_text(encoding="utf-8")
        except OSError as exc:
            raise IOError(str(exc)) from exc
    try:
        return ser.thompson_from_json(json.loads(text))
    except json.JSONDecodeError as exc:
        raise UsageError(f"element is not JSON: {exc}") from exc


def cmd_thompson(args, argv):
    f = _element(args.f)
    if args.verb == "eval":
        if args.t is None:
            raise UsageError("thompson eval needs --t")
        result = str(evaluate(f, parse_dyadic(args.t)))
    elif args.verb == "compose":
        result = ser.thompson_to_json(compose(f, _element(args.g)))
    elif args.verb == "inverse":
        result = ser.thompson_to_json(inverse(f))
    else:
        result = str(circle_distance_to_identity(f))
    _emit_json({"manifest": _manifest(argv, _config(args), []), "result": result}, args.out)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dyadic-limit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def source(sp):
        sp.add_argument("--d", type=int)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--isometry", help="isometry JSON file instead of --d/--seed")

    def common(sp, kmax=6):
        sp.add_argument("--kmax", type=int, default=kmax)
        sp.add_argument("--tol", type=float)
        sp.add_argument("--out")

    sp = sub.add_parser("sample", help="sample a Haar-random isometry")
    source(sp)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("check", help="full diagnostics report for one isometry")
    source(sp)
    common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("decay", help="CSV of |R^k(x)| and the bound |x|^(2^k)")
    source(sp)
    common(sp)
    sp.set_defaults(func=cmd_decay)

    sp = sub.add_parser("melement", help="CSV of rotation matrix elements M_k")
    source(sp)
    common(sp, kmax=4)
    sp.add_argument("--mode", choices=["transfer", "direct", "both"], default="transfer")
    sp.add_argument("--phi")
    sp.add_argument("--psi")
    sp.add_argument("--direction", type=int, choices=[-1, 1], default=-1)
    sp.set_defaults(func=cmd_melement)

    sp = sub.add_parser("scan", help="diagnostics over a Haar ensemble")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    common(sp)
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("example", help="reproduce the explicit examples")
    sp.add_argument("example", choices=["so3", "stabilizer"])
    sp.add_argument("--d", type=int)
    common(sp)
    sp.set_defaults(func=cmd_example)

    sp = sub.add_parser("thompson", help="Thompson group utilities")
    sp.add_argument("verb", choices=["eval", "compose", "inverse", "distance"])
    sp.add_argument("--f", help="element: JSON, @file, identity or rotation:k")
    sp.add_argument("--g", help="second element for compose (result is f∘g)")
    sp.add_argument("--t", help="point p/2^n for eval")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_thompson)
    return p


def run(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args, argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (SizeLimitError, DyadicOverflowError) as exc:
        print(f"size limit: {exc}", file=sys.stderr)
        return 3
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return 2
    except IOError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 4
    return 0


def main() -> None:
    sys.exit(run())
