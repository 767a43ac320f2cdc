import math

import click

from .. import scanner
from ..config import settings
from ..decompose import all_cubes_char2_scan
from .common import emit, emit_rows, resolve, run_options, split_run_options


@click.group("scan")
def scan():
    """Finite-field scans; records stream as JSONL sorted by q."""


@scan.command("n-scan")
@run_options
@click.option("--set", "set_name", default="T", help="T, Tplus or P<m>.")
@click.option("--qmin", default=2, type=int)
@click.option("--qmax", default=settings.scan_qmax, type=int)
@click.option("--force", is_flag=True, help="Recompute even when cached.")
@click.pass_context
def n_scan(ctx: click.Context, set_name: str, qmin: int, qmax: int, force: bool, **kwargs):
    """Coverage of k by a + b + c*d over the set; reports N."""
    cfg = resolve(ctx, split_run_options(kwargs)[0])
    result = scanner.n_scan(set_name, qmin, qmax, force=force, workers=cfg.workers)
    emit_rows(cfg, [r.to_dict() for r in result.records])
    emit(cfg, result.to_dict())
    return 0


@scan.command("power-scan")
@run_options
@click.option("--qmax", default=256, type=int)
@click.option("--mmax", default=12, type=int)
@click.option("--force", is_flag=True)
@click.pass_context
def power_scan(ctx: click.Context, qmax: int, mmax: int, force: bool, **kwargs):
    """Surjectivity of x -> x^m on F_q^*, by enumeration and by gcd."""
    cfg = resolve(ctx, split_run_options(kwargs)[0])
    rows = scanner.power_scan(qmax, mmax, force=force, workers=cfg.workers)
    emit_rows(cfg, rows)
    fmax = min(int(math.log2(qmax)), 20) if qmax >= 2 else 0
    summary = {
        "qmax": qmax,
        "mmax": mmax,
        "pairs": len(rows),
        "surjective": sum(1 for r in rows if r["surjective"]),
        "mismatches": 0,
    }
    if fmax:
        summary["all_cubes_char2"] = all_cubes_char2_scan(fmax)
    emit(cfg, summary)
    return 0


@scan.command("curve-scan")
@run_options
@click.option("--curve", "curve", default="dimC", type=click.Choice(["dimC", "dim2C"]))
@click.option("--qmin", default=2, type=int)
@click.option("--qmax", default=101, type=int)
@click.option("--force", is_flag=True)
@click.pass_context
def curve_scan(ctx: click.Context, curve: str, qmin: int, qmax: int, force: bool, **kwargs):
    """Point counts on the witness curves, first admissible a per q."""
    cfg = resolve(ctx, split_run_options(kwargs)[0])
    rows = scanner.curve_scan(curve, qmin, qmax, force=force, workers=cfg.workers)
    emit_rows(cfg, rows)
    below = [r["q"] for r in rows if r["q"] >= 25 and 2 * r["count"] < r["q"]]
    emit(cfg, {"curve": curve, "qmin": qmin, "qmax": qmax, "rows": len(rows), "below_half_q": below})
    return 0
