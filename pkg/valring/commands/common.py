import json
import logging
from typing import Literal

import click
from pydantic import BaseModel, Field, ValidationError, field_validator

from .. import db
from ..config import settings
from ..errors import UsageError
from ..fields import Field as ValuedField
from ..fields import make_field

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class RunConfig(BaseModel):
    """Flags of one invocation layered over the environment settings."""
    field: str | None = None
    method: Literal["main", "main2"] = "main2"
    ell_mode: Literal["per-field", "uniform"] = Field(default=settings.ell_mode, validate_default=True)
    precision: int | None = Field(default=None, ge=1)
    seed: int = settings.seed
    output: Literal["json", "text"] = "json"
    cache_dir: str = settings.cache_dir
    workers: int = Field(default=settings.workers, ge=1)
    log_level: str = settings.log_level
    branch: Literal["auto", "sumset_sell", "cauchy_davenport"] = "auto"
    verify: bool = False

    @field_validator("log_level")
    @classmethod
    def _level(cls, v: str) -> str:
        v = v.upper()
        if v not in LOG_LEVELS:
            raise ValueError(f"unknown log level {v}")
        return v

    def descriptor(self) -> str:
        if self.field is None:
            raise UsageError("--field is required")
        text = self.field.strip()
        if self.precision is not None and ":prec=" not in text and not text.startswith("Fq:"):
            text += f":prec={self.precision}"
        return text

    def handle(self) -> ValuedField:
        return make_field(self.descriptor())


def run_options(f):
    """Flags accepted both before and after the subcommand name; later ones win."""
    options = [
        click.option("--field", default=None, help="Field descriptor, e.g. Qp:5 or Laurent:2^1."),
        click.option("--method", default=None, type=click.Choice(["main", "main2"])),
        click.option("--ell-mode", default=None, type=click.Choice(["per-field", "uniform"])),
        click.option("--precision", default=None, type=int, help="Working precision in pi-digits."),
        click.option("--seed", default=None, type=int),
        click.option("--output", default=None, type=click.Choice(["json", "text"])),
        click.option("--cache-dir", default=None, help="Overrides VALRING_CACHE."),
        click.option("--workers", default=None, type=int),
        click.option("--log-level", default=None),
        click.option("--branch", default=None, type=click.Choice(["auto", "sumset_sell", "cauchy_davenport"])),
        click.option("--verify", is_flag=True, default=None, help="Re-check certificates through the predicates."),
    ]
    for option in reversed(options):
        f = option(f)
    return f


RUN_KEYS = ("field", "method", "ell_mode", "precision", "seed", "output", "cache_dir", "workers", "log_level",
            "branch", "verify")


def split_run_options(kwargs: dict) -> tuple[dict, dict]:
    run = {k: kwargs.pop(k) for k in RUN_KEYS if k in kwargs}
    return {k: v for k, v in run.items() if v is not None}, kwargs


def resolve(ctx: click.Context, given: dict) -> RunConfig:
    """Validate the merged flags and apply the process-wide ones (log level, cache dir)."""
    values = {**(ctx.obj or {}), **given}
    try:
        cfg = RunConfig(**values)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise UsageError(f"--{where.replace('_', '-')}: {first['msg']}") from exc
    logging.getLogger().setLevel(cfg.log_level)
    db.configure(cfg.cache_dir)
    if cfg.field is not None:
        cfg.handle()
    return cfg


def _text(value) -> str:
    return value if isinstance(value, str) else json.dumps(value, sort_keys=True, ensure_ascii=False)


def emit(cfg: RunConfig, payload: dict) -> None:
    if cfg.output == "json":
        click.echo(json.dumps(payload, sort_keys=True, ensure_ascii=False))
        return
    for key in sorted(payload):
        click.echo(f"{key}: {_text(payload[key])}")


def emit_rows(cfg: RunConfig, rows: list[dict]) -> None:
    """One JSON object per line, ordered by q."""
    for row in sorted(rows, key=lambda r: (r.get("q", 0), r.get("m", 0))):
        if cfg.output == "json":
            click.echo(json.dumps(row, sort_keys=True, separators=(",", ":")))
        else:
            click.echo(" ".join(f"{k}={_text(row[k])}" for k in sorted(row)))
