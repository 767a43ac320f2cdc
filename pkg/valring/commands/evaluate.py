import click

from ..config import settings
from ..errors import UsageError
from ..formula import StrategyConfig, evaluate, parse
from .common import emit, resolve, run_options, split_run_options


def parse_bindings(K, pairs: tuple[str, ...]) -> dict:
    env = {}
    for pair in pairs:
        name, sep, literal = pair.partition("=")
        if not sep or not name.strip():
            raise UsageError(f"binding {pair!r} is not NAME=LITERAL")
        env[name.strip()] = K.parse_element(literal)
    return env


@click.command("eval")
@run_options
@click.argument("formula")
@click.option("--bind", "bindings", multiple=True, help="NAME=LITERAL, repeatable.")
@click.option("--depth", default=settings.search_depth, type=int, help="Digits per search candidate.")
@click.option("--vmax", default=settings.search_vmax, type=int, help="Largest |valuation| searched.")
@click.option("--no-deciders", is_flag=True, help="Skip the registered deciders.")
@click.pass_context
def eval_cmd(ctx: click.Context, formula: str, bindings: tuple[str, ...], depth: int, vmax: int,
             no_deciders: bool, **kwargs):
    """Evaluate FORMULA; verdict true/false/unknown with witnesses and the strategies used."""
    cfg = resolve(ctx, split_run_options(kwargs)[0])
    K = cfg.handle()
    phi = parse(formula)
    env = parse_bindings(K, bindings)
    strategy = StrategyConfig(depth=depth, vmax=vmax, use_deciders=not no_deciders)
    result = evaluate(phi, env, K, strategy)
    emit(cfg, result.to_dict())
    return 1 if result.verdict == "false" else 0
