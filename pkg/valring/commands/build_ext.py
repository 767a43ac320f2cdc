import json
from fractions import Fraction

import click
from pydantic import BaseModel, ValidationError, model_validator

from ..errors import InvalidPlan
from ..formula import parse, print_formula
from ..valdef import (
    build_extension_formula,
    field_for_plan,
    make_plan,
    maximal_ideal_formula,
    uniformizer_set,
    verify_extension_formula,
)
from .common import emit, resolve, run_options, split_run_options


class PlanFile(BaseModel):
    """Plan file: {"p": 2, "f": 1, "e": 2, "eis": [-2, 0, 1]}.

    `eis` is a monic Eisenstein polynomial with constant coefficients (low to high); `hstar` gives
    H*_0..H*_(e-1) as coefficient lists in z instead. Both may be omitted for x^e - p.
    """
    p: int
    f: int = 1
    e: int | None = None
    G: list[int] | None = None
    eis: list[int | str] | None = None
    hstar: list[list[int | str]] | None = None

    @model_validator(mode="after")
    def _degrees(self):
        if self.eis is not None and self.hstar is not None:
            raise ValueError("give either eis or hstar")
        if self.eis is not None:
            if len(self.eis) < 2 or Fraction(self.eis[-1]) != 1:
                raise ValueError("eis must be monic of degree at least 1")
            if self.e is not None and self.e != len(self.eis) - 1:
                raise ValueError(f"e = {self.e} but eis has degree {len(self.eis) - 1}")
        if self.hstar is not None and self.e is not None and len(self.hstar) != self.e:
            raise ValueError(f"e = {self.e} but {len(self.hstar)} H* coefficients")
        return self

    def to_plan(self):
        if self.eis is not None:
            return make_plan(self.p, self.f, len(self.eis) - 1, self.G, [(Fraction(c),) for c in self.eis[:-1]])
        if self.hstar is not None:
            hstar = [tuple(Fraction(c) for c in h) for h in self.hstar]
            return make_plan(self.p, self.f, len(hstar), self.G, hstar)
        return make_plan(self.p, self.f, self.e or 1, self.G)


def load_plan(text: str):
    try:
        return PlanFile.model_validate(json.loads(text)).to_plan()
    except (ValueError, ValidationError) as exc:
        raise InvalidPlan(f"plan file: {exc}") from exc


@click.command("build-ext")
@run_options
@click.argument("plan_file", type=click.File("r"))
@click.option("--samples", default=200, type=int, help="Random elements checked against val >= 0; 0 skips.")
@click.pass_context
def build_ext(ctx: click.Context, plan_file, samples: int, **kwargs):
    """Formulas defining the valuation ring of the extension described by PLAN_FILE."""
    cfg = resolve(ctx, split_run_options(kwargs)[0])
    plan = load_plan(plan_file.read())
    existential, universal = build_extension_formula(plan)
    K = field_for_plan(plan, cfg.precision)
    texts = {"existential": print_formula(existential), "universal": print_formula(universal)}
    payload = {
        "plan": plan.to_dict(),
        "field": K.descriptor,
        **texts,
        "maximal_ideal": print_formula(maximal_ideal_formula(plan)),
        "round_trip": parse(texts["existential"]) == existential and parse(texts["universal"]) == universal,
        "uniformizers": [K.format_element(y) for y in uniformizer_set(plan, K)],
    }
    ok = payload["round_trip"]
    if samples > 0:
        report = verify_extension_formula(plan, K, samples, cfg.seed)
        payload["report"] = report
        ok = ok and report["ok"]
    emit(cfg, payload)
    return 0 if ok else 1
