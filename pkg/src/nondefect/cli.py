"""Command-line front end (``nd``).

Exit status: 0 for certified / guaranteed outcomes, 3 for inconclusive or
silent ones, 1 for usage and scenario errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

import jsonschema

from . import __version__
from .bounds import (
    Verdict,
    fatpoint_report,
    froberg_report,
    mixture_identifiable,
    nondefective_criterion,
    partition_bounds,
    secant_bounds,
    two_component_criterion,
)
from .bundle import FatPoints, Froberg, Moments, Partition, family_from_dict
from .certify import DEFAULT_SEED, DEFAULT_TRIALS, certify_alpha, certify_r, defect_evidence_scan
from .fieldcore import DEFAULT_PRIME, enumerate_types
from .figures import emit_plot, figure_fatpoints, figure_froberg, rows_to_csv, write_csv
from .sequences import DIAGONAL, diagonal_check, trace

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INCONCLUSIVE = 3

MODES = ("bounds", "certify", "certify_r", "sequence", "figure")

_pos = {"type": "integer", "minimum": 1}
_nonneg = {"type": "integer", "minimum": 0}

SCENARIO_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["family", "mode"],
    "additionalProperties": False,
    "properties": {
        "family": {
            "type": "object",
            "required": ["kind"],
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": ["froberg", "fatpoints", "partition", "moments"]},
                "n": _pos,
                "degrees": {"type": "array", "items": _pos, "minItems": 1},
                "shift": _pos,
                "D": _pos,
                "multiplicities": {"type": "array", "items": _pos, "minItems": 1},
                "d": _pos,
                "parts": {"type": "array", "items": _pos, "minItems": 1},
                "families": {"type": "array", "items": {"type": "string"}, "minItems": 1},
            },
            "allOf": [
                {"if": {"properties": {"kind": {"const": "froberg"}}}, "then": {"required": ["degrees"]}},
                {"if": {"properties": {"kind": {"const": "fatpoints"}}}, "then": {"required": ["D", "multiplicities"]}},
                {"if": {"properties": {"kind": {"const": "partition"}}}, "then": {"required": ["n", "parts"]}},
                {"if": {"properties": {"kind": {"const": "moments"}}}, "then": {"required": ["n"]}},
            ],
        },
        "mode": {"enum": list(MODES)},
        "alpha": {"type": "array", "items": _nonneg},
        "r": _nonneg,
        "sweep": {
            "type": "object",
            "required": ["n_min", "n_max"],
            "additionalProperties": False,
            "properties": {
                "n_min": {"type": "integer", "minimum": 2},
                "n_max": {"type": "integer", "minimum": 2},
                "fraction": {"type": "number", "minimum": 0, "maximum": 1},
            },
        },
        "sequence": {
            "type": "object",
            "required": ["probe"],
            "additionalProperties": False,
            "properties": {
                "probe": _nonneg,
                "direction": {"anyOf": [_nonneg, {"const": "diagonal"}]},
                "steps": _pos,
            },
        },
        "prime": {"anyOf": [_pos, {"type": "array", "items": _pos, "minItems": 1}]},
        "seeds": {"type": "array", "items": _nonneg, "minItems": 1},
        "trials": _pos,
        "seed": _nonneg,
        "workers": _pos,
        "out": {"type": "string"},
        "csv": {"type": "string"},
        "svg": {"type": "string"},
    },
}


class ScenarioError(ValueError):
    """Scenario file does not parse or violates the schema / family preconditions."""


def validate_scenario(doc: Any) -> list[str]:
    """Schema violations as ``path: message`` strings (empty when valid)."""
    validator = jsonschema.Draft202012Validator(SCENARIO_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    return [f"{'/'.join(map(str, e.absolute_path)) or '<root>'}: {e.message}" for e in errors]


def load_scenario(path: str | Path) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ScenarioError(f"{path}: {exc}") from exc
    problems = validate_scenario(doc)
    if problems:
        raise ScenarioError("scenario violates the schema:\n  " + "\n  ".join(problems))
    return doc


def _primes(doc: dict) -> list[int]:
    p = doc.get("prime", DEFAULT_PRIME)
    return list(p) if isinstance(p, list) else [p]


def _provenance(doc: dict, family) -> dict:
    return {
        "tool": "nondefect",
        "version": __version__,
        "mode": doc["mode"],
        "family": family.describe() if family is not None else doc["family"],
        "prime": doc.get("prime", DEFAULT_PRIME),
        "seed": doc.get("seed", DEFAULT_SEED),
        "trials": doc.get("trials", DEFAULT_TRIALS),
    }


def _need(doc: dict, key: str) -> Any:
    if key not in doc:
        raise ScenarioError(f"mode {doc['mode']!r} requires the key {key!r}")
    return doc[key]


def _alpha(doc: dict, family) -> tuple[int, ...]:
    alpha = tuple(_need(doc, "alpha"))
    if len(alpha) != family.k:
        raise ScenarioError(
            f"alpha: {list(alpha)} has {len(alpha)} entries but the family has {family.k} components "
            f"({', '.join(family.component_labels())})"
        )
    return alpha


def bounds_for(family, alpha) -> dict:
    """Criterion report for one component type, with family-specific extras."""
    if isinstance(family, Froberg):
        rep = froberg_report(family.n, family.degrees, family.shift, alpha)
    elif isinstance(family, FatPoints):
        rep = fatpoint_report(family.n, family.D, family.multiplicities, alpha)
    else:
        rep = nondefective_criterion(family.ranks(), family.ambient_dim(), alpha)
    out = rep.as_dict()
    if family.k == 2:
        out["two_component_criterion"] = two_component_criterion(rep.ranks, rep.ambient_dim, alpha)
    if isinstance(family, Moments) and family.families == ("gaussian", "laplace"):
        out["identifiable"] = mixture_identifiable(family.n, alpha[0], alpha[1])
    return out


def run_bounds(doc: dict, family) -> tuple[dict, int]:
    ranks = family.ranks()
    report: dict[str, Any] = {"secant_bounds": secant_bounds(family.ambient_dim(), max(ranks)).as_dict()}
    if isinstance(family, Partition):
        report["partition_bounds"] = partition_bounds(family.n, family.d, family.parts).as_dict()
    if "alpha" in doc:
        rep = bounds_for(family, _alpha(doc, family))
        report["bounds"] = rep
        ok = rep["verdict"] != Verdict.CRITERION_SILENT.value
    else:
        r = _need(doc, "r")
        reps = [bounds_for(family, a) for a in enumerate_types(family.k, r)]
        report["r"] = r
        report["types"] = reps
        ok = all(x["verdict"] != Verdict.CRITERION_SILENT.value for x in reps)
    return report, EXIT_OK if ok else EXIT_INCONCLUSIVE


def run_certify(doc: dict, family) -> tuple[dict, int]:
    primes = _primes(doc)
    trials = doc.get("trials", DEFAULT_TRIALS)
    seed = doc.get("seed", DEFAULT_SEED)
    workers = doc.get("workers", 1)
    if "alpha" not in doc and "r" in doc:
        return run_certify_r(doc, family)
    alpha = _alpha(doc, family)
    if len(primes) > 1 or "seeds" in doc:
        scan = defect_evidence_scan(family, alpha, primes, doc.get("seeds", [seed]), trials)
        return {"scan": scan.as_dict()}, EXIT_OK if scan.grade.value == "CERTIFIED" else EXIT_INCONCLUSIVE
    rep = certify_alpha(family, alpha, primes[0], trials, seed, workers)
    return {"certificate": rep.as_dict()}, EXIT_OK if rep.certified else EXIT_INCONCLUSIVE


def run_certify_r(doc: dict, family) -> tuple[dict, int]:
    primes = _primes(doc)
    rep = certify_r(
        family,
        _need(doc, "r"),
        primes[0],
        doc.get("trials", DEFAULT_TRIALS),
        doc.get("seed", DEFAULT_SEED),
        doc.get("workers", 1),
    )
    return {"certify_r": rep.as_dict()}, EXIT_OK if rep.r_nondefective else EXIT_INCONCLUSIVE


def run_sequence(doc: dict, family) -> tuple[dict, int]:
    alpha = _alpha(doc, family)
    seq = _need(doc, "sequence")
    direction = seq.get("direction", "diagonal")
    direction = DIAGONAL if direction == "diagonal" else direction
    probe = seq["probe"]
    prime = _primes(doc)[0]
    seed = doc.get("seed", DEFAULT_SEED)
    tr = trace(family, alpha, direction, probe, seq.get("steps", 4), prime, seed)
    check = diagonal_check(family, alpha, probe, prime, seed)
    report = {"trace": tr.as_dict(), "diagonal_check": check.as_dict()}
    if "csv" in doc:
        lines = ["s,alpha,observed_value"]
        for s, v in enumerate(tr.values):
            lines.append(f"{s},{' '.join(map(str, tr.alpha_at(s)))},{v}")
        _write_text(doc["csv"], "\n".join(lines) + "\n")
    ok = check.consequence_holds and tr.monotone and tr.within_bounds
    return report, EXIT_OK if ok else EXIT_INCONCLUSIVE


def run_figure(doc: dict) -> tuple[dict, int]:
    fam = doc["family"]
    sweep = _need(doc, "sweep")
    if sweep["n_max"] < sweep["n_min"]:
        raise ScenarioError("sweep: n_max must be >= n_min")
    if fam["kind"] == "froberg":
        degrees = sorted(fam["degrees"])
        if len(degrees) != 2:
            raise ScenarioError("family/degrees: the figure sweep needs exactly two degrees")
        rows = figure_froberg(
            sweep["n_min"], sweep["n_max"], degrees[0], degrees[1], sweep.get("fraction", 0.2), fam.get("shift", 1)
        )
    elif fam["kind"] == "fatpoints":
        rows = figure_fatpoints(
            sweep["n_min"], sweep["n_max"], fam["D"], fam["multiplicities"], sweep.get("fraction", 0.3)
        )
    else:
        raise ScenarioError("family/kind: figure mode supports froberg and fatpoints only")
    if "csv" in doc:
        write_csv(rows, doc["csv"])
        if "svg" in doc:
            emit_plot(doc["csv"], doc["svg"])
    report = {"rows": [dict(zip(("n", "r_blue", "r_orange", "ratio"), r.cells())) for r in rows]}
    return report, EXIT_OK


def run_document(doc: dict, mode: str | None = None) -> tuple[dict, int]:
    """Execute a validated scenario document; returns the report and exit status."""
    doc = dict(doc)
    if mode is not None:
        doc["mode"] = mode
    if doc["mode"] == "figure":
        body, status = run_figure(doc)
        family = None
    else:
        try:
            family = family_from_dict(doc["family"])
        except (KeyError, ValueError) as exc:
            raise ScenarioError(f"family: {exc}") from exc
        runner = {
            "bounds": run_bounds,
            "certify": run_certify,
            "certify_r": run_certify_r,
            "sequence": run_sequence,
        }[doc["mode"]]
        body, status = runner(doc, family)
        body["ambient_dim"] = family.ambient_dim()
        body["ranks"] = family.ranks()
    report = {"provenance": _provenance(doc, family), "exit_status": status, **body}
    return report, status


def render_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def run(scenario_path: str | Path, mode: str | None = None, overrides: dict | None = None, out: str | None = None) -> int:
    """Run a scenario file, write its report and return the exit status."""
    try:
        doc = load_scenario(scenario_path)
        if overrides:
            doc.update({k: v for k, v in overrides.items() if v is not None})
            problems = validate_scenario(doc)
            if problems:
                raise ScenarioError("overrides violate the schema:\n  " + "\n  ".join(problems))
        report, status = run_document(doc, mode)
    except (ScenarioError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render_report(report)
    target = out or doc.get("out")
    if target:
        _write_text(target, text)
    else:
        sys.stdout.write(text)
    return status


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="nd", description="Nondefectivity bounds and Terracini rank certificates.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def scenario_cmd(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--scenario", required=True, help="scenario JSON file")
        p.add_argument("--out", help="report path (default: scenario 'out' or stdout)")
        return p

    scenario_cmd("run", "run a scenario in its own mode")
    scenario_cmd("bounds", "closed-form criteria for a scenario")
    cert = scenario_cmd("certify", "Terracini rank certificate for a scenario")
    cert.add_argument("--trials", type=int)
    cert.add_argument("--prime", type=int)
    cert.add_argument("--seed", type=int)
    cert.add_argument("--workers", type=int)
    scenario_cmd("sequence", "observed intersection sequence for a scenario")

    fig = sub.add_parser("figure", help="bound sweep over n (CSV, optional SVG)")
    fig.add_argument("which", choices=["froberg", "fatpoints"])
    fig.add_argument("--n-min", type=int, required=True)
    fig.add_argument("--n-max", type=int, required=True)
    fig.add_argument("--out", required=True, help="CSV path")
    fig.add_argument("--svg", help="optional SVG plot path")
    fig.add_argument("--fraction", type=float, help="share of points on the first component")
    fig.add_argument("--shift", type=int, default=1, help="froberg: degree shift above d2")
    fig.add_argument("--degrees", type=int, nargs=2, default=(5, 6), metavar=("D1", "D2"))
    fig.add_argument("--D", dest="D", type=int, default=9, help="fatpoints: target degree")
    fig.add_argument("--multiplicities", type=int, nargs=2, default=(4, 3), metavar=("M1", "M2"))
    return ap


def _figure(args) -> int:
    try:
        if args.which == "froberg":
            rows = figure_froberg(
                args.n_min, args.n_max, args.degrees[0], args.degrees[1],
                0.2 if args.fraction is None else args.fraction, args.shift,
            )
        else:
            rows = figure_fatpoints(
                args.n_min, args.n_max, args.D, args.multiplicities,
                0.3 if args.fraction is None else args.fraction,
            )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    write_csv(rows, args.out)
    if args.svg:
        emit_plot(args.out, args.svg)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "figure":
        return _figure(args)
    mode = {"run": None, "bounds": "bounds", "sequence": "sequence"}.get(args.command)
    overrides = None
    if args.command == "certify":
        mode = "certify"
        overrides = {"trials": args.trials, "prime": args.prime, "seed": args.seed, "workers": args.workers}
    return run(args.scenario, mode, overrides, args.out)


__all__ = ["main", "run", "run_document", "validate_scenario", "load_scenario", "rows_to_csv"]
