import json
import logging
import sys

import click

from . import __version__
from .commands import build_ext, decide, evaluate, scan, selftest
from .commands.common import run_options, split_run_options
from .errors import UsageError, ValringError

logger = logging.getLogger("valring")

USAGE_EXIT = UsageError.exit_code


@click.group("valring")
@click.version_option(__version__, prog_name="valring")
@run_options
@click.pass_context
def cli(ctx: click.Context, **kwargs):
    """Uniform definitions of valuation rings: decide, witness, scan, build-ext, eval, selftest.

    Stdout carries JSON (JSONL for scans); logs go to stderr.
    """
    given, _ = split_run_options(kwargs)
    ctx.obj = given
    logging.basicConfig(stream=sys.stderr, format="%(asctime)s %(levelname)s %(name)s %(message)s")


cli.add_command(decide.decide)
cli.add_command(decide.witness)
cli.add_command(scan.scan)
cli.add_command(build_ext.build_ext)
cli.add_command(evaluate.eval_cmd)
cli.add_command(selftest.selftest)


def _fail(payload: dict, code: int) -> int:
    click.echo(json.dumps(payload, sort_keys=True, ensure_ascii=False))
    return code


def main(argv: list[str] | None = None) -> int:
    """Run the CLI and return the exit code instead of exiting."""
    try:
        rv = cli.main(args=argv, prog_name="valring", standalone_mode=False)
    except click.ClickException as exc:
        return _fail({"error": "usage", "detail": exc.format_message()}, USAGE_EXIT)
    except click.exceptions.Abort:
        return 130
    except ValringError as exc:
        logger.debug("valring: %s: %s", exc.code, exc.detail)
        return _fail(exc.to_dict(), exc.exit_code)
    if isinstance(rv, int):
        return rv
    return 0


def run() -> None:
    sys.exit(main())
