"""Command line front end.

Exit codes: 0 certified (or task succeeded), 1 refuted, 2 inconclusive,
3 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import jsonschema

from . import __version__
from .certification import (
    Budget,
    build_certificate,
    classify_n2_case,
    kappa_invariant,
    primitive_stability_verdict,
    replay_certificate,
)
from .empirics import (
    directed_anosov_probe,
    flat_distances_along,
    gap_growth,
    svg_line_plot,
    write_growth_csv,
)
from .families import Representation, build_example, commutator_rotation, triangle_641
from .freegroup import GenSet, WordError, ray_from_choices, superbasis
from .dynamics import NotLoxodromic, classify
from .flags import FlagError
from .linalg import LinalgError, fraction_str, to_fraction

EXIT_CERTIFIED, EXIT_REFUTED, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3
CONFIG_VERSION = 1

log = logging.getLogger("flagcert")

_SCALAR = {"oneOf": [{"type": "integer"}, {"type": "number"}, {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}]}
_MATRIX = {"type": "array", "minItems": 2, "items": {"type": "array", "minItems": 2, "items": _SCALAR}}

CONFIG_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["version"],
    "additionalProperties": False,
    "properties": {
        "version": {"const": CONFIG_VERSION},
        "n": {"type": "integer", "minimum": 2},
        "backend": {"enum": ["exact", "float"]},
        "example": {
            "type": "object",
            "required": ["family"],
            "additionalProperties": False,
            "properties": {
                "family": {"type": "string"},
                "n": {"type": "integer", "minimum": 2},
                "t": _SCALAR,
            },
        },
        "generators": {
            "type": "object",
            "required": ["a", "b"],
            "additionalProperties": False,
            "properties": {"a": _MATRIX, "b": _MATRIX},
        },
        "alphabet": {"type": "array", "minItems": 2, "maxItems": 2, "items": {"type": "string", "pattern": "^[aAbB]+$"}},
        "tasks": {"type": "array", "items": {"enum": ["certify", "probe"]}},
        "budget": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                k: {"type": "integer", "minimum": 0}
                for k in ("max_push", "random_samples", "eps_halvings", "candidates_per_seed", "denominator", "seed")
            },
        },
        "probe": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "length": {"type": "integer", "minimum": 0},
                "mode": {"enum": ["auto", "exhaustive", "sampled"]},
                "samples": {"type": "integer", "minimum": 1},
                "flat_rays": {"type": "integer", "minimum": 0},
            },
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"certificate": {"type": "string"}, "csv": {"type": "string"}, "svg": {"type": "string"}},
        },
        "seed": {"type": "integer"},
    },
    "oneOf": [{"required": ["example"]}, {"required": ["generators"]}],
}


class InputError(Exception):
    """Bad command line arguments or configuration."""


def load_config(path: str | Path) -> dict[str, Any]:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read config {path}: {exc}") from None
    try:
        jsonschema.validate(data, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise InputError(f"invalid config: {exc.message}") from None
    return data


def representation_from_config(cfg: dict[str, Any]) -> Representation:
    try:
        if "example" in cfg:
            ex = cfg["example"]
            rep = build_example(ex["family"], ex.get("n"), ex.get("t"))
        else:
            rep = Representation.from_json({"name": "config", **cfg["generators"]})
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(str(exc)) from None
    if "n" in cfg and cfg["n"] != rep.n:
        raise InputError(f"config says n = {cfg['n']} but the matrices are {rep.n} x {rep.n}")
    if cfg.get("backend") == "float":
        rep = rep.to_float()
    return rep


def _alphabet(cfg: dict[str, Any]) -> GenSet:
    if "alphabet" not in cfg:
        return GenSet.standard()
    try:
        return GenSet.parse(*cfg["alphabet"])
    except WordError as exc:
        raise InputError(str(exc)) from None


def _threads() -> int:
    raw = os.environ.get("FLAGCERT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise InputError(f"FLAGCERT_THREADS must be an integer, got {raw!r}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _dump(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# commands


_VERDICT_EXIT = {"certified": EXIT_CERTIFIED, "refuted-hypothesis": EXIT_REFUTED, "inconclusive": EXIT_INCONCLUSIVE}


def cmd_certify(cfg: dict[str, Any], out: str | None = None) -> int:
    rep = representation_from_config(cfg)
    if not rep.exact:
        raise InputError("certification needs exact (integer or p/q) matrix entries")
    budget = Budget.from_json({**cfg.get("budget", {}), **({"seed": cfg["seed"]} if "seed" in cfg else {})})
    verdict = primitive_stability_verdict(rep, _alphabet(cfg), budget)
    cert = build_certificate(rep, verdict)
    _write(out or cfg.get("output", {}).get("certificate"), _dump(cert))
    log.info("verdict %s via %s", verdict.verdict, verdict.route)
    return _VERDICT_EXIT[verdict.verdict]


def cmd_replay(path: str) -> int:
    try:
        cert = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read certificate {path}: {exc}") from None
    try:
        result = replay_certificate(cert)
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"malformed certificate: {exc}") from None
    for m in result.mismatches:
        print(m, file=sys.stderr)
    if not result.ok:
        return EXIT_REFUTED
    return _VERDICT_EXIT[cert["result"]["verdict"]]


def cmd_probe(cfg: dict[str, Any], csv_path: str | None = None, svg_path: str | None = None) -> int:
    """Directed-Anosov probe over R, R^-1, R', R'^-1; one CSV of worst rays.

    Returns 0 when every alphabet has a positive fitted slope, else 2.
    """
    rep = representation_from_config(cfg).to_float()
    opts = cfg.get("probe", {})
    length = opts.get("length", 16)
    outputs = cfg.get("output", {})
    csv_path = csv_path or outputs.get("csv")
    svg_path = svg_path or outputs.get("svg")
    seed = cfg.get("seed", 0)
    r = _alphabet(cfg)
    series = []
    summaries = []
    if length >= 1:
        for gens in (r, superbasis(r)[0]):
            report = directed_anosov_probe(
                rep, gens, length, opts.get("mode", "auto"), opts.get("samples", 4096), seed, _threads()
            )
            summaries.extend(report.alphabets)
    flat = {} if opts.get("flat_rays", 0) else None
    for s in summaries:
        ray = ray_from_choices(GenSet.parse(*s.alphabet.strip("{}").split(",")), [int(c) for c in s.worst_ray])
        g = gap_growth(rep, ray, length, alphabet=s.alphabet)
        series.append(g)
        if flat is not None:
            flat[g.ray] = flat_distances_along(rep, GenSet.parse(*s.alphabet.strip("{}").split(",")), ray.choices)

    buf = io.StringIO()
    write_growth_csv(buf, rep.n, series, flat)
    _write(csv_path, buf.getvalue())
    if svg_path and summaries:
        worst = min(summaries, key=lambda s: s.min_kappa)
        Path(svg_path).write_text(svg_line_plot(worst.worst.gap_min, f"{worst.alphabet} ray {worst.worst_ray}"))
    min_kappa = min((s.min_kappa for s in summaries), default=None)
    summary = {"length": length, "min_kappa": min_kappa, "alphabets": [s.to_json() for s in summaries]}
    print(_dump(summary), file=sys.stderr, end="")
    return EXIT_CERTIFIED if min_kappa is not None and min_kappa > 0 else EXIT_INCONCLUSIVE


def cmd_examples(family: str, n: int | None, t) -> int:
    if family not in ("641", "642", "643"):
        raise InputError(f"unknown family {family!r}; choose 641, 642 or 643")
    try:
        rep = build_example(family, n, t)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(str(exc)) from None
    sys.stdout.write(_dump(rep.to_json()))
    return EXIT_CERTIFIED


SWEEP_COLUMNS = ["t", "triangle_invariant", "discriminant", "cos_theta", "niven_verdict", "certification_verdict"]


def sweep_rows(family: str, grid: Sequence[Fraction], n: int | None = None, certify: bool = False) -> list[list[str]]:
    rows = []
    for t in grid:
        tri = disc = cos = niven = cert = ""
        if family == "641":
            try:
                tri = fraction_str(triangle_641(n or 3, t))
            except (NotLoxodromic, FlagError, LinalgError, ZeroDivisionError):
                tri = "undefined"
        elif family == "643":
            rot = commutator_rotation(t)
            disc = fraction_str(rot.discriminant)
            if rot.cos_theta is not None:
                cos = fraction_str(rot.cos_theta)
                niven = "rational angle (discrete)" if rot.rational_angle else "irrational angle (non-discrete)"
        if certify:
            cert = primitive_stability_verdict(build_example(family, n, t)).verdict
        rows.append([fraction_str(t), tri, disc, cos, niven, cert])
    return rows


def cmd_sweep(family: str, grid: Sequence[Fraction], n: int | None, certify: bool, out: str | None) -> int:
    if family not in ("641", "643"):
        raise InputError("sweep supports families 641 and 643")

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    w.writerows(sweep_rows(family, grid, n, certify))
    _write(out, buf.getvalue())
    return EXIT_CERTIFIED


def cmd_invariants(cfg: dict[str, Any]) -> int:
    """Classification data for the configured pair."""
    rep = representation_from_config(cfg)
    data: dict[str, Any] = {
        "n": rep.n,
        "a": classify(rep.a).to_json(),
        "b": classify(rep.b).to_json(),
    }
    if rep.n == 2:
        k = kappa_invariant(rep)
        data["commutator_trace"] = fraction_str(k) if isinstance(k, Fraction) else k
        data["case"] = classify_n2_case(rep)
    sys.stdout.write(_dump(data))
    return EXIT_CERTIFIED


# ---------------------------------------------------------------------------
# argument parsing


def _fraction(s: str) -> Fraction:
    try:
        return to_fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}") from None


def _grid(s: str) -> list[Fraction]:
    """Comma separated rationals, or start:stop:step (stop inclusive)."""
    s = s.strip()
    if not s:
        return []
    if ":" in s:
        start, stop, step = (_fraction(x) for x in s.split(":"))
        if step <= 0:
            raise argparse.ArgumentTypeError("step must be positive")
        out = []
        t = start
        while t <= stop:
            out.append(t)
            t += step
        return out
    return [_fraction(x) for x in s.split(",")]


def _config_from_args(args) -> dict[str, Any]:
    if getattr(args, "config", None):
        cfg = load_config(args.config)
    elif getattr(args, "example", None):
        ex: dict[str, Any] = {"family": args.example}
        if args.n is not None:
            ex["n"] = args.n
        if args.t is not None:
            ex["t"] = fraction_str(args.t)
        cfg = {"version": CONFIG_VERSION, "example": ex}
    else:
        raise InputError("give --config or --example")
    if getattr(args, "seed", None) is not None:
        cfg["seed"] = args.seed
    return cfg


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="flagcert", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def source(sp):
        sp.add_argument("--config", help="JSON job config")
        sp.add_argument("--example", help="641, 642, 643, fuchsian2, trivial or reducible")
        sp.add_argument("--n", type=int)
        sp.add_argument("--t", type=_fraction)
        sp.add_argument("--seed", type=int)

    c = sub.add_parser("certify", help="certify primitive stability")
    source(c)
    c.add_argument("--out", help="certificate path (default stdout)")
    c.add_argument("--replay", metavar="CERT", help="re-check an existing certificate instead")

    pr = sub.add_parser("probe", help="directed-Anosov probe with CSV output")
    source(pr)
    pr.add_argument("--length", "-L", type=int)
    pr.add_argument("--csv", help="CSV path (default stdout)")
    pr.add_argument("--svg", help="SVG plot of the worst ray")

    e = sub.add_parser("examples", help="print an example family as JSON")
    e.add_argument("family")
    e.add_argument("--n", type=int)
    e.add_argument("--t", type=_fraction)

    s = sub.add_parser("sweep", help="invariants of a family over a grid of t")
    s.add_argument("family")
    s.add_argument("--grid", type=_grid, default=[], help="e.g. 1/2,2,3 or 1:4:1/2")
    s.add_argument("--n", type=int)
    s.add_argument("--certify", action="store_true", help="also run certification per t")
    s.add_argument("--out")

    i = sub.add_parser("invariants", help="classification data for a pair")
    source(i)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "certify":
            if args.replay:
                return cmd_replay(args.replay)
            return cmd_certify(_config_from_args(args), args.out)
        if args.command == "probe":
            cfg = _config_from_args(args)
            if args.length is not None:
                cfg.setdefault("probe", {})["length"] = args.length
            return cmd_probe(cfg, args.csv, args.svg)
        if args.command == "examples":
            return cmd_examples(args.family, args.n, args.t)
        if args.command == "sweep":
            return cmd_sweep(args.family, args.grid, args.n, args.certify, args.out)
        if args.command == "invariants":
            return cmd_invariants(_config_from_args(args))
    except InputError as exc:
        print(f"flagcert: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
