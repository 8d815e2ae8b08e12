"""Command-line entry point: ``orbiproj dim|classify|solve|surgery|devmap|check``.

Inputs are JSON, read from ``--input`` (a path, inline JSON, or ``-`` for
stdin).  Exit status is 0 on success, 1 for a domain error (reported as JSON
on stderr) and 2 for malformed input.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from . import devmap as dm
from .elementary import ElementaryStructure, solve_request
from .elementary.structure import ends_match, extract_invariants
from .errors import CheckFailed, MalformedSignature, MalformedStructure, OrbiprojError
from .orbifold import (
    ANNULAR_NAMES,
    OrbifoldSignature,
    classify_elementary,
    classify_zero_euler,
    deformation_dimension,
    euler_characteristic,
    teichmuller_dimension,
)
from .projective import classify as classify_collineation
from .surgery import ConvexStructure, crosscap, fold, paste, silver
from .tolerances import DEFAULT

MALFORMED = (MalformedStructure, MalformedSignature)


class InputError(Exception):
    pass


def _round17(x):
    if isinstance(x, float):
        if not math.isfinite(x):
            return str(x)
        return float(f"{x:.17g}")
    if isinstance(x, dict):
        return {k: _round17(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round17(v) for v in x]
    if isinstance(x, np.ndarray):
        return _round17(x.tolist())
    if isinstance(x, np.generic):
        return _round17(x.item())
    return x


def dumps(obj) -> str:
    return json.dumps(_round17(obj), indent=1)


def _load(source: str):
    if source == "-":
        text = sys.stdin.read()
    elif source.lstrip().startswith(("{", "[")):
        text = source
    else:
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {source}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None


def _emit(text: str, output) -> None:
    if output:
        Path(output).write_text(text if text.endswith("\n") else text + "\n")
    else:
        click.echo(text)


def _structure(data) -> ElementaryStructure:
    if not isinstance(data, dict):
        raise InputError("expected a JSON object")
    if "generators" in data:
        return ElementaryStructure.from_json(data)
    return solve_request(data)


def _run(fn):
    """Map library errors onto exit codes."""
    try:
        fn()
    except InputError as exc:
        click.echo(json.dumps({"error": "MalformedInput", "message": str(exc)}), err=True)
        sys.exit(2)
    except MALFORMED as exc:
        click.echo(json.dumps({"error": type(exc).__name__, "message": str(exc)}), err=True)
        sys.exit(2)
    except OrbiprojError as exc:
        click.echo(json.dumps({"error": type(exc).__name__, "message": str(exc)}), err=True)
        sys.exit(1)


@click.group()
@click.option("--tolerance", type=float, default=None,
              help="Override the relation-residual tolerance.")
@click.pass_context
def main(ctx, tolerance):
    """Convex real projective structures on 2-orbifolds."""
    ctx.obj = DEFAULT if tolerance is None else DEFAULT.with_(relation=tolerance)


input_opt = click.option("--input", "source", default="-", show_default=True,
                         help="JSON file, inline JSON, or - for stdin.")
output_opt = click.option("--output", default=None, help="Output file (default stdout).")


@main.command()
@input_opt
@output_opt
def dim(source, output):
    """Euler characteristic and deformation dimensions of a signature."""
    def go():
        sig = OrbifoldSignature.from_json(_load(source))
        _emit(json.dumps({"chi": str(euler_characteristic(sig)),
                          "deform_dim": deformation_dimension(sig),
                          "teich_dim": teichmuller_dimension(sig)}), output)
    _run(go)


@main.command("classify")
@input_opt
@output_opt
@click.pass_obj
def classify_cmd(tol, source, output):
    """Elementary or annular type of a signature, or the spectral type of {"matrix": ...}."""
    def go():
        data = _load(source)
        if isinstance(data, dict) and "matrix" in data:
            try:
                m = np.array(data["matrix"], dtype=float).reshape(3, 3)
            except (TypeError, ValueError) as exc:
                raise InputError(f"bad matrix: {exc}") from None
            c = classify_collineation(m, tol)
            _emit(dumps({"kind": c.kind.value, "lambda": c.lam, "tau": c.tau,
                         "purely_hyperbolic": c.purely_hyperbolic, "order": c.order}), output)
            return
        sig = OrbifoldSignature.from_json(data)
        chi = euler_characteristic(sig)
        out = {"chi": str(chi), "elementary": None, "annular": None}
        if chi < 0:
            t = classify_elementary(sig)
            if t is not None:
                out["elementary"] = {"type": t.tag, "orders": list(t.orders)}
        elif chi == 0:
            k = classify_zero_euler(sig)
            if k is not None:
                out["annular"] = {"number": k, "name": ANNULAR_NAMES[k]}
        _emit(json.dumps(out), output)
    _run(go)


@main.command()
@input_opt
@output_opt
def solve(source, output):
    """Solve an elementary request (or a list of requests) and print the structure JSON."""
    def go():
        data = _load(source)
        if isinstance(data, list):
            _emit(dumps([solve_request(d).to_json() for d in data]), output)
        else:
            _emit(dumps(solve_request(data).to_json()), output)
    _run(go)


def run_script(script: dict, tol=DEFAULT) -> ConvexStructure:
    """Execute a surgery script.

    ``{"structures": {label: request}, "ops": [{"op": "paste", "target": label,
    "end": name, "other": label, "other_end": name, "params": [...], "as": label}, ...],
    "result": label}``.  Ops are paste, crosscap, silver and fold.
    """
    try:
        pool = {label: ConvexStructure.from_elementary(solve_request(req), label)
                for label, req in script["structures"].items()}
        last = None
        for step in script.get("ops", []):
            op, target = step["op"], pool[step["target"]]
            if op == "paste":
                other = pool[step["other"]] if step.get("other") not in (None, step["target"]) else None
                out = paste(target, step["end"], other, step["other_end"],
                            step.get("params", (0.0, 0.0)), tol)
            elif op == "crosscap":
                out = crosscap(target, step["end"], tol)
            elif op == "silver":
                out = silver(target, step["end"], tol)
            elif op == "fold":
                out = fold(target, step["end"], step.get("param"), tol)
            else:
                raise InputError(f"unknown surgery op {op!r}")
            last = step.get("as", step["target"])
            pool[last] = out
        return pool[script.get("result", last)]
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad surgery script: {exc!r}") from None


@main.command()
@input_opt
@output_opt
@click.pass_obj
def surgery(tol, source, output):
    """Run a surgery script and print the composite structure."""
    def go():
        S = run_script(_load(source), tol)
        _emit(dumps(S.to_json()), output)
    _run(go)


@main.command()
@input_opt
@output_opt
@click.option("--depth", type=int, default=3, show_default=True)
@click.option("--json", "json_out", default=None, help="Also write the tessellation JSON here.")
@click.option("--width", type=int, default=800, show_default=True)
@click.pass_obj
def devmap(tol, source, output, depth, json_out, width):
    """Render the developing map of a structure or solve request to SVG."""
    def go():
        if depth < 0:
            raise InputError("depth must be non-negative")
        S = _structure(_load(source))
        T = dm.enumerate_tiles(S, depth, tol)
        rep = dm.convexity_check(T, tol)
        _emit(dm.render_svg(T, width=width), output)
        if json_out:
            data = T.to_json()
            data["convexity"] = rep.to_json()
            Path(json_out).write_text(dumps(data) + "\n")
        click.echo(dumps({"tiles": len(T.tiles), **rep.to_json()}), err=True)
    _run(go)


@main.command()
@input_opt
@output_opt
@click.pass_obj
def check(tol, source, output):
    """Re-verify relations and end invariants of a structure file."""
    def go():
        S = _structure(_load(source))
        residuals = S.relation_residuals()
        report = {"relations": residuals, "max_residual": max(residuals.values(), default=0.0)}
        ok = report["max_residual"] < tol.relation
        if ok:
            found = extract_invariants(S, tol)
            report["ends"] = [e.to_json() for e in found]
            ok = ends_match(found, [e.spec for e in S.ends], tol.invariant_match)
        report["passed"] = ok
        _emit(dumps(report), output)
        if not ok:
            raise CheckFailed(f"structure failed re-verification (max residual "
                              f"{report['max_residual']:.3e})")
    _run(go)


if __name__ == "__main__":  # pragma: no cover
    main()
