"""Command-line front end: transmit, tree, detect, keygen."""

from __future__ import annotations

import csv
import io
import json
import os
import sys
from fractions import Fraction

import click

from qhide import adversary, analysis, protocol, statevec as sv

EXIT_INTERNAL = 3


def _resolve_seed(seed):
    if seed is not None:
        return seed
    env = os.environ.get("QHIDE_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise click.UsageError(f"QHIDE_SEED must be an integer, got {env!r}")
    return 0


def _parse_fraction(text, name):
    try:
        f = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise click.UsageError(f"{name} must be a fraction like 1/2, got {text!r}")
    if not 0 <= f <= 1:
        raise click.UsageError(f"{name} must be in [0, 1], got {text}")
    return f


def _emit_json(data):
    click.echo(json.dumps(data, indent=2, sort_keys=True))


def _fmt(value) -> str:
    return f"{float(value):.6f}"


def _internal_guard(fn):
    def wrapped(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (sv.NotSeparable, AssertionError) as exc:
            click.echo(f"internal invariant violation: {exc}", err=True)
            sys.exit(EXIT_INTERNAL)

    wrapped.__name__ = fn.__name__
    return wrapped


@click.group()
def main():
    """Exact simulator and analysis harness for the state-hiding
    transmission protocol."""


@main.command()
@click.option("--message", required=True, help="Bit string to send.")
@click.option("--key", "key_text", required=True, help="Key string, e.g. N1H2N1.")
@click.option("--seed", type=int, default=None, help="RNG seed (default: QHIDE_SEED or 0).")
@click.option("--eve", "eve_spec", default=None,
              help='Eavesdropper: "random" or a strategy JSON object.')
@click.option("--trials", type=click.IntRange(min=1), default=1,
              help="Number of independent transmissions.")
@click.option("--cycle-key", is_flag=True, help="Reuse the key cyclically.")
@click.option("--output", type=click.Choice(["json", "table"]), default="table")
@_internal_guard
def transmit(message, key_text, seed, eve_spec, trials, cycle_key, output):
    """Send a message through the channel and compare Bob's bits."""
    try:
        bits = protocol.parse_message(message)
        key = protocol.parse_key(key_text)
    except (ValueError, protocol.MalformedKey) as exc:
        raise click.UsageError(str(exc))
    if not cycle_key and len(key) < len(bits):
        raise click.UsageError(
            f"key has {len(key)} entries but the message has {len(bits)} bits "
            "(pass --cycle-key to reuse it)"
        )

    channel = None
    if eve_spec is not None:
        if eve_spec == "random":
            channel = adversary.make_eve_channel()
        else:
            try:
                strategy = adversary.EveStrategy.from_json_dict(json.loads(eve_spec))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise click.UsageError(f"bad --eve strategy: {exc}")
            channel = adversary.make_eve_channel(strategy)

    rng = sv.make_rng(_resolve_seed(seed))
    runs = []
    errors = 0
    for _ in range(trials):
        received = protocol.transmit_message(bits, key, channel, rng, cycle_key=cycle_key)
        matches = [s == r for s, r in zip(bits, received)]
        errors += matches.count(False)
        runs.append({"received": "".join(map(str, received)), "matches": matches})
    error_rate = errors / (trials * len(bits)) if bits else 0.0

    if output == "json":
        _emit_json({"sent": message, "runs": runs, "error_rate": error_rate})
    else:
        click.echo(f"sent      {message}")
        for i, run in enumerate(runs):
            flags = "".join("." if m else "x" for m in run["matches"])
            click.echo(f"run {i:3d}   {run['received']}   {flags}")
        click.echo(f"error rate {error_rate:.6f}")


@main.command()
@click.option("--mode", type=click.Choice(["paper", "quantum", "mc"]), default="paper")
@click.option("--trials", type=click.IntRange(min=1), default=100000,
              help="Monte Carlo trials per leaf (mode mc).")
@click.option("--seed", type=int, default=None)
@click.option("--output", type=click.Choice(["json", "csv", "table"]), default="table")
@click.option("--p-hide", default="1/2", help="Prior on Alice hiding.")
@click.option("--p-gm", default="1/2", help="Prior on Eve diffusing before measuring.")
@click.option("--p-sm", default="1/2", help="Prior on Eve resending the measured state.")
@_internal_guard
def tree(mode, trials, seed, output, p_hide, p_gm, p_sm):
    """Evaluate the 12-leaf eavesdropping action tree."""
    priors = analysis.BranchPriors(
        _parse_fraction(p_hide, "--p-hide"),
        _parse_fraction(p_gm, "--p-gm"),
        _parse_fraction(p_sm, "--p-sm"),
    )
    rng = sv.make_rng(_resolve_seed(seed)) if mode == "mc" else None
    report = analysis.build_tree_report(
        trials=trials if mode == "mc" else None, rng=rng, priors=priors
    )

    if output == "json":
        _emit_json(report.to_json_dict())
    elif output == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerows(report.to_csv_rows())
        click.echo(buf.getvalue(), nl=False)
    else:
        header = f"{'alice':5} {'eve':3} {'resend':6} {'paper':>10} {'quantum':>10}"
        if mode == "mc":
            header += f" {'mc':>10} {'stderr':>10}"
        click.echo(header)
        for leaf in report.leaves:
            s = leaf.scenario
            line = (f"{s.alice_action:5} {s.eve_action:3} {s.resend:6} "
                    f"{_fmt(leaf.paper):>10} {_fmt(leaf.quantum):>10}")
            if mode == "mc":
                line += f" {_fmt(leaf.mc):>10} {_fmt(leaf.mc_stderr):>10}"
            click.echo(line)
        for agg_mode in ("paper", "quantum"):
            agg = report.aggregates[agg_mode]
            click.echo(f"[{agg_mode}] bob-correct | hide = {_fmt(agg.bob_correct_given_hide)}"
                       f"  | no-hide = {_fmt(agg.bob_correct_given_no_hide)}"
                       f"  per-bit-no-detect = {_fmt(agg.per_bit_no_detect)}")
        agg = report.aggregates["paper"]
        click.echo(f"eve-correct strict = {_fmt(agg.eve_correct_strict)}"
                   f"  quantum = {_fmt(agg.eve_correct_quantum)}")


@main.command()
@click.option("--mode", type=click.Choice(["paper", "quantum"]), default="paper")
@click.option("--k-max", type=click.IntRange(min=0), default=10,
              help="Largest number of sacrificial test bits.")
@click.option("--output", type=click.Choice(["json", "table"]), default="table")
@click.option("--p-hide", default="1/2")
@click.option("--p-gm", default="1/2")
@click.option("--p-sm", default="1/2")
@_internal_guard
def detect(mode, k_max, output, p_hide, p_gm, p_sm):
    """Detection probability after k test bits, plus the published claims."""
    priors = analysis.BranchPriors(
        _parse_fraction(p_hide, "--p-hide"),
        _parse_fraction(p_gm, "--p-gm"),
        _parse_fraction(p_sm, "--p-sm"),
    )
    agg = analysis.aggregate(mode, priors, k_max=k_max)
    if output == "json":
        _emit_json(agg.to_json_dict())
        return
    click.echo(f"mode {mode}, per-bit no-detect = {_fmt(agg.per_bit_no_detect)}")
    for k in sorted(agg.detect_after_k_bits):
        click.echo(f"k = {k:3d}  detect = {_fmt(agg.detect_after_k_bits[k])}")
    click.echo("published claims:")
    for claim in agg.paper_claims:
        flag = "matched" if claim["matched"] else "MISMATCH"
        click.echo(f"  {claim['name']:38} claimed {_fmt(claim['claimed'])} "
                   f"computed {_fmt(claim['computed'])}  {flag}")


@main.command()
@click.option("--length", type=click.IntRange(min=1), required=True)
@click.option("--seed", type=int, default=None)
@_internal_guard
def keygen(length, seed):
    """Emit a random key of the given length."""
    rng = sv.make_rng(_resolve_seed(seed))
    entries = tuple(
        (protocol.HIDE if rng.random() < 0.5 else protocol.NO_HIDE,
         1 if rng.random() < 0.5 else 2)
        for _ in range(length)
    )
    click.echo(protocol.SecretKey(entries).format())


if __name__ == "__main__":
    main()
