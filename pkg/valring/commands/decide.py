import logging

import click

from ..errors import InvariantViolation
from ..valdef import decide_OK, verify_certificate
from .common import emit, resolve, run_options, split_run_options

logger = logging.getLogger("valdef")


def _decide(ctx: click.Context, x: str, kwargs: dict, full: bool) -> int:
    given, _ = split_run_options(kwargs)
    cfg = resolve(ctx, given)
    K = cfg.handle()
    elem = K.parse_element(x)
    cert = decide_OK(elem, K, cfg.method, branch=cfg.branch, ell_mode=cfg.ell_mode)
    payload = cert.to_dict()
    if full:
        payload.update(field=K.descriptor, method=cfg.method, x=K.format_element(elem))
        if cert.branch == "sumset_sell":
            payload["certificate"] = cert.data
    if cfg.verify:
        if not verify_certificate(cert, K):
            raise InvariantViolation("certificate failed the predicates-only re-check")
        payload["verified"] = True
    logger.info("valdef: %s %s in %s via %s", cert.verdict, K.format_element(elem), K.descriptor, cert.branch)
    emit(cfg, payload)
    return 0 if cert.verdict == "inside" else 1


@click.command("decide")
@run_options
@click.argument("x")
@click.pass_context
def decide(ctx: click.Context, x: str, **kwargs):
    """Decide whether X lies in the valuation ring; exit 0 inside, 1 outside."""
    return _decide(ctx, x, kwargs, full=False)


@click.command("witness")
@run_options
@click.argument("x")
@click.pass_context
def witness(ctx: click.Context, x: str, **kwargs):
    """Like decide, with the full certificate."""
    return _decide(ctx, x, kwargs, full=True)
