import time

import click

from ..selftest import SCALES, SUITES, run_suites
from .common import emit, resolve, run_options, split_run_options


@click.command("selftest")
@run_options
@click.option("--suite", "suites", multiple=True, type=click.Choice(sorted(SUITES)), help="Repeatable; default all.")
@click.option("--scale", default="reduced", type=click.Choice(sorted(SCALES)))
@click.pass_context
def selftest(ctx: click.Context, suites: tuple[str, ...], scale: str, **kwargs):
    """Run the invariant suites; nonzero exit on any failure."""
    cfg = resolve(ctx, split_run_options(kwargs)[0])
    start = time.perf_counter()
    results = run_suites(list(suites) or None, scale, cfg.seed)
    for r in results:
        emit(cfg, r.to_dict())
    ok = all(r.ok for r in results)
    emit(cfg, {"ok": ok, "scale": scale, "seed": cfg.seed, "suites": [r.name for r in results],
               "failed": [r.name for r in results if not r.ok]})
    click.echo(f"selftest: {len(results)} suites in {time.perf_counter() - start:.1f}s", err=True)
    return 0 if ok else 1
