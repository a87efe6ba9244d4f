"""Command line front end.

Subcommands: bounds (the full report), oracle (exhaustive small-scale
code search), partition (lattice cells), explain-chain (how the chain
bound was obtained).  Exit codes: 0 fine, 1 unusable input, 2 internal
cross-check violated, 3 oracle guard refused the search size.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction

import click

from .chains import explain_sbac
from .lp import build_spm_lp, lp_text
from .model import (
    ProblemError,
    ProblemFormatError,
    ProblemValidationError,
    parse_problem,
)
from .oracle import OracleLimitError, oracle_best_rate
from .partition import g_partition
from .report import ALL_BOUNDS, compute_bounds, report_json
from .values import INFINITE, Marker, format_value
from .bits import indices_of

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INCONSISTENT = 2
EXIT_LIMIT = 3


def _load(source: str, notation: str):
    try:
        if source == "-":
            text = sys.stdin.read()
        else:
            with open(source, "r", encoding="utf-8") as fh:
                text = fh.read()
    except OSError as e:
        click.echo(f"cannot read {source}: {e}", err=True)
        sys.exit(EXIT_INPUT)
    try:
        return parse_problem(text, notation=notation)
    except ProblemValidationError as e:
        for v in e.violations:
            click.echo(f"invalid instance: {v.message}", err=True)
        sys.exit(EXIT_INPUT)
    except ProblemError as e:
        click.echo(f"cannot parse {source}: {e}", err=True)
        sys.exit(EXIT_INPUT)


@click.group()
def main() -> None:
    """Bounds on the symmetric rate of secure broadcast with side
    information, plus an exhaustive toy-scale code search."""


@main.command(name="bounds")
@click.argument("source")
@click.option(
    "--bounds",
    "names",
    default=",".join(ALL_BOUNDS),
    show_default=True,
    help="comma-separated subset of " + ",".join(ALL_BOUNDS),
)
@click.option("--json", "as_json", is_flag=True, help="machine-readable output")
@click.option(
    "--notation",
    type=click.Choice(["A", "B"]),
    default="A",
    show_default=True,
    help="text input lists side information (A) or interfering sets (B)",
)
@click.option(
    "--dump-lp",
    type=click.Path(dir_okay=False, writable=True),
    default=None,
    help="write the LP in readable form to this path",
)
@click.option("--decimal", is_flag=True, help="add float approximations")
def bounds_cmd(source, names, as_json, notation, dump_lp, decimal):
    """Compute the bound report for SOURCE (a file, or - for stdin)."""
    instance = _load(source, notation)
    which = tuple(s.strip() for s in names.split(",") if s.strip())
    for name in which:
        if name not in ALL_BOUNDS:
            click.echo(f"unknown bound {name!r}", err=True)
            sys.exit(EXIT_INPUT)
    if dump_lp:
        model = build_spm_lp(instance)
        with open(dump_lp, "w", encoding="utf-8") as fh:
            fh.write(lp_text(model, instance))
    try:
        report = compute_bounds(instance, which)
    except ValueError as e:  # size guards inside the bound machinery
        click.echo(f"refusing computation: {e}", err=True)
        sys.exit(EXIT_LIMIT)
    if as_json:
        click.echo(report_json(report, decimal=decimal))
    else:
        recv = len(instance.receivers())
        eav = len(instance.parties) - recv
        click.echo(
            f"n={instance.n}, {len(instance.parties)} parties "
            f"({recv} receiving, {eav} eavesdropping)"
        )
        for name in ALL_BOUNDS:
            if name not in report.bounds:
                continue
            v = report.bounds[name]
            line = f"{name:<6} {format_value(v)}"
            if decimal and isinstance(v, Fraction):
                line += f"  ({float(v):.6f})"
            d = report.details.get(name, {})
            if name == "smais" and d.get("peak_cell") is not None:
                line += f"  via rho[{d['peak_cell']}]"
            if name == "sbac" and d.get("chain"):
                hs = ", ".join(str(h) for h in d["edge_heights"])
                line += "  via chain " + "-".join(map(str, d["chain"]))
                line += f" (edge heights {hs})"
            if name == "lower":
                chain = d.get("chain") or []
                line += f"  k={len(chain)}"
                if chain:
                    order = ", ".join(
                        f"{i} (party {j})"
                        for i, j in zip(chain, d["chain_parties"])
                    )
                    line += f", order {order}"
            if name == "spm":
                line += "  certified" if d.get("certified") else "  uncertified"
            t = report.times.get(name)
            if t is not None:
                line += f"  [{t:.3f} s]"
            click.echo(line)
            if name == "smais" and d.get("steps"):
                for cell, lo, hi, h in d["steps"]:
                    lo_s = "{" + ",".join(map(str, lo)) + "}"
                    hi_s = "{" + ",".join(map(str, hi)) + "}"
                    click.echo(f"  cell {cell}: {lo_s} <= {hi_s}  h = {h}")
        for note in report.notes:
            click.echo(f"note: {note}")
        for note in report.interpretations:
            click.echo(f"note: {note}")
    if not report.consistent:
        for msg in report.inconsistencies:
            click.echo(f"inconsistent: {msg}", err=True)
        sys.exit(EXIT_INCONSISTENT)


@main.command(name="oracle")
@click.argument("source")
@click.option("--max-t", default=2, show_default=True, help="largest block length")
@click.option("--max-M", "max_m", default=8, show_default=True, help="largest alphabet")
@click.option("--find-all", is_flag=True, help="search every (t, M) grid point")
@click.option("--threads", default=1, show_default=True)
@click.option("--json", "as_json", is_flag=True)
@click.option(
    "--notation", type=click.Choice(["A", "B"]), default="A", show_default=True
)
def oracle_cmd(source, max_t, max_m, find_all, threads, as_json, notation):
    """Exhaustively search for valid codes of SOURCE at toy sizes."""
    instance = _load(source, notation)
    try:
        res = oracle_best_rate(
            instance,
            max_t=max_t,
            max_m=max_m,
            find_all=find_all,
            threads=threads,
        )
    except OracleLimitError as e:
        click.echo(f"refusing search: {e}", err=True)
        sys.exit(EXIT_LIMIT)

    # Sandwich check: an enumerated valid code can never beat an upper
    # bound, so a violation is a soundness bug somewhere.
    report = compute_bounds(instance, ("mais", "smais", "sbac", "spm"))
    frac = res.best.as_fraction()
    verdict: dict[str, bool] = {}
    for name, v in report.bounds.items():
        if v is None:
            continue
        if isinstance(v, Marker):
            verdict[name] = v is INFINITE or res.best.is_zero()
        else:
            verdict[name] = res.best <= v
    ok = all(verdict.values())

    if as_json:
        payload = {
            "best": {
                "t": res.best.t,
                "m": res.best.m,
                "value": format_value(frac) if frac is not None else str(res.best),
            },
            "feasible": [list(tm) for tm in res.feasible],
            "searched": [list(tm) for tm in res.searched],
            "witness": list(res.witness.encode) if res.witness else None,
            "sandwich": {
                "upper_bounds": {
                    k: format_value(v) for k, v in report.bounds.items()
                },
                "ok": ok,
            },
        }
        click.echo(json.dumps(payload, sort_keys=True, indent=2, separators=(",", ": ")))
    else:
        if res.best.is_zero():
            click.echo("no valid code found")
        else:
            shown = format_value(frac) if frac is not None else str(res.best)
            click.echo(
                f"best rate {shown} at t={res.best.t}, M={res.best.m}"
            )
        if res.feasible:
            pairs = ", ".join(f"(t={t}, M={m})" for t, m in res.feasible)
            click.echo(f"feasible grid points: {pairs}")
        click.echo(f"searched {len(res.searched)} grid point(s)")
        if res.witness:
            w = res.witness
            click.echo("witness table:")
            for x, c in enumerate(w.encode):
                groups = " ".join(
                    format(
                        (x >> (k * w.t)) & ((1 << w.t) - 1), f"0{w.t}b"
                    )
                    for k in range(w.n)
                )
                click.echo(f"  {groups} -> {c}")
        for name in ("mais", "smais", "sbac", "spm"):
            if name in verdict:
                state = "ok" if verdict[name] else "VIOLATED"
                click.echo(
                    f"sandwich vs {name} = "
                    f"{format_value(report.bounds[name])}: {state}"
                )
    if not ok:
        click.echo("sandwich check violated: rate exceeds an upper bound", err=True)
        sys.exit(EXIT_INCONSISTENT)


@main.command(name="partition")
@click.argument("source")
@click.option("--json", "as_json", is_flag=True)
@click.option(
    "--notation", type=click.Choice(["A", "B"]), default="A", show_default=True
)
def partition_cmd(source, as_json, notation):
    """Show the equality cells of the subset lattice for SOURCE."""
    instance = _load(source, notation)
    try:
        part = g_partition(instance)
    except ValueError as e:
        click.echo(f"refusing computation: {e}", err=True)
        sys.exit(EXIT_LIMIT)
    if as_json:
        payload = {
            "gamma": part.gamma,
            "cells": [
                sorted(sorted(indices_of(m)) for m in members)
                for members in part.cells
            ],
            "residual": part.residual_id,
        }
        click.echo(json.dumps(payload, sort_keys=True, indent=2, separators=(",", ": ")))
    else:
        click.echo(part.describe())


@main.command(name="explain-chain")
@click.argument("source")
@click.option(
    "--notation", type=click.Choice(["A", "B"]), default="A", show_default=True
)
def explain_chain_cmd(source, notation):
    """Show how the chain bound for SOURCE comes about."""
    instance = _load(source, notation)
    try:
        click.echo(explain_sbac(instance))
    except ValueError as e:
        click.echo(f"refusing computation: {e}", err=True)
        sys.exit(EXIT_LIMIT)


if __name__ == "__main__":
    main()
