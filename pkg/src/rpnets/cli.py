"""Command-line front end.

Exit codes: 0 success, 1 property violated or assertion failed, 2 usage or
parse error.
"""

from __future__ import annotations

import json
import sys

import click

from .analysis import (
    ExplorationBounds,
    MarkingPattern,
    PropertyQuery,
    build_lts,
    check_property_on,
    expand_to_ground,
    export_lts_dot,
    export_lts_lines,
)
from .core import NetError, validate_net
from .netfile import NetFileError, load_net, save_net, _canon_semantics
from .stepping import MIXED, FORWARD_ONLY, apply_move, moves
from .traces import TraceError, load_trace, run_trace


def _load(path):
    try:
        return load_net(path)
    except (NetFileError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


def _bounds(max_states, max_depth, semantics, direction, normalize_keys=False, seed=None):
    return ExplorationBounds(
        max_states=max_states,
        max_depth=max_depth,
        semantics=_canon_semantics(semantics) if semantics else None,
        direction=direction,
        normalize_keys=normalize_keys,
        seed=seed,
    )


def _apply_mode(net, mode, semantics):
    """Resolve the --mode flag: validates the net's interpretation and picks
    the matching reversal semantics family when none was given."""
    if mode is None:
        return semantics
    if mode == "ground" and net.mode != "ground":
        click.echo("error: --mode ground needs a ground-mode net", err=True)
        sys.exit(2)
    if mode in ("individual", "collective") and net.mode != "variable":
        click.echo(f"error: --mode {mode} needs a variable-mode net", err=True)
        sys.exit(2)
    if mode == "collective":
        return semantics or "coll"
    return semantics


@click.group()
def main():
    """Execute, reverse and analyse reversing Petri nets."""


@main.command()
@click.argument("net_file", type=click.Path(exists=True))
@click.option("--require-bond-preservation", is_flag=True,
              help="additionally reject transitions that destroy bonds")
def validate(net_file, require_bond_preservation):
    """Load a net file and report well-formedness violations."""
    from .core import check_bond_preservation

    try:
        net = load_net(net_file)
    except NetFileError as exc:
        click.echo(str(exc), err=True)
        sys.exit(2)
    issues = validate_net(net)
    if require_bond_preservation:
        issues += check_bond_preservation(net)
    if issues:
        for issue in issues:
            click.echo(issue)
        sys.exit(1)
    click.echo(f"{net.name}: well-formed ({len(net.places)} places, "
               f"{len(net.transitions)} transitions)")


@main.command()
@click.argument("net_file", type=click.Path(exists=True))
@click.argument("script_file", type=click.Path(exists=True))
def run(net_file, script_file):
    """Run a trace script against a net, checking its assertions."""
    net = _load(net_file)
    try:
        script = load_trace(script_file)
        report = run_trace(net, script)
    except TraceError as exc:
        click.echo(f"FAILED {exc}", err=True)
        sys.exit(1)
    except NetFileError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    for line in report.steps:
        click.echo(line)
    click.echo("ok")


@main.command()
@click.argument("net_file", type=click.Path(exists=True))
@click.option("--semantics", default=None, help="bt | causal | oco | coll")
def step(net_file, semantics):
    """Interactive stepping: list enabled moves, pick one, repeat."""
    net = _load(net_file)
    semantics = _canon_semantics(semantics) if semantics else net.default_semantics
    state = net.initial_state()
    undo = []
    while True:
        avail = moves(net, state, semantics, MIXED)
        click.echo("\nmarking:")
        for place in net.places:
            content = state.marking[place]
            if content.empty:
                continue
            items = sorted(repr(t) for t in content.tokens)
            items += sorted(repr(b) for b in content.bonds)
            click.echo(f"  {place}: {', '.join(items)}")
        if not avail:
            click.echo("no enabled moves (deadlock)")
        for i, mv in enumerate(avail):
            click.echo(f"  [{i}] {mv!r}")
        choice = click.prompt(
            "move number, u(ndo), or q(uit)", default="q", show_default=False
        )
        if choice == "q":
            return
        if choice == "u":
            if undo:
                state = undo.pop()
            continue
        try:
            mv = avail[int(choice)]
        except (ValueError, IndexError):
            click.echo("no such move")
            continue
        undo.append(state)
        state = apply_move(net, state, mv, semantics)


@main.command()
@click.argument("net_file", type=click.Path(exists=True))
@click.option("--mode", type=click.Choice(["ground", "individual", "collective"]),
              default=None, help="required token interpretation of the net")
@click.option("--semantics", default=None)
@click.option("--max-states", default=10000, show_default=True)
@click.option("--max-depth", default=None, type=int)
@click.option("--direction", type=click.Choice([MIXED, FORWARD_ONLY]), default=MIXED)
@click.option("--normalize-keys/--raw-keys", default=False,
              help="quotient away history-key drift in cyclic nets")
@click.option("--seed", default=None, type=int,
              help="shuffle move processing order (schedule-independence checks)")
@click.option("--format", "fmt", type=click.Choice(["text", "json", "dot"]),
              default="text", show_default=True)
def explore(net_file, mode, semantics, max_states, max_depth, direction,
            normalize_keys, seed, fmt):
    """Build the bounded labelled transition system."""
    net = _load(net_file)
    semantics = _apply_mode(net, mode, semantics)
    lts = build_lts(
        net, net.initial_state(),
        _bounds(max_states, max_depth, semantics, direction, normalize_keys, seed),
    )
    if fmt == "dot":
        click.echo(export_lts_dot(lts))
    elif fmt == "json":
        click.echo(json.dumps({
            "states": len(lts.states), "edges": len(lts.edges),
            "truncated": lts.truncated,
        }))
    else:
        click.echo(
            f"{len(lts.states)} states, {len(lts.edges)} edges"
            + (" (truncated)" if lts.truncated else "")
        )


@main.command(name="export-lts")
@click.argument("net_file", type=click.Path(exists=True))
@click.option("--semantics", default=None)
@click.option("--max-states", default=10000, show_default=True)
@click.option("--max-depth", default=None, type=int)
@click.option("--direction", type=click.Choice([MIXED, FORWARD_ONLY]), default=MIXED)
@click.option("--normalize-keys/--raw-keys", default=False)
@click.option("--format", "fmt", type=click.Choice(["text", "dot"]), default="text")
def export_lts(net_file, semantics, max_states, max_depth, direction, normalize_keys, fmt):
    """Export the bounded LTS in the line-based or DOT format."""
    net = _load(net_file)
    lts = build_lts(
        net, net.initial_state(),
        _bounds(max_states, max_depth, semantics, direction, normalize_keys),
    )
    if fmt == "dot":
        click.echo(export_lts_dot(lts))
    else:
        for line in export_lts_lines(lts):
            click.echo(line)


@main.command()
@click.argument("net_file", type=click.Path(exists=True))
@click.argument("kind", type=click.Choice(
    ["reachability", "coverability", "homeState", "liveness",
     "deadlock", "persistence", "siphon", "trap"]))
@click.option("--target", default=None,
              help='target marking as JSON, e.g. \'{"y": ["a_1"]}\'')
@click.option("--history", default=None,
              help='target history as JSON, e.g. \'{"t1": [1]}\' (implies exact)')
@click.option("--level", default=1, show_default=True, help="liveness level 0-4")
@click.option("--transition", default=None, help="liveness: restrict to one transition")
@click.option("--places", default=None, help="siphon/trap place set, comma-separated")
@click.option("--mode", type=click.Choice(["ground", "individual", "collective"]),
              default=None, help="required token interpretation of the net")
@click.option("--semantics", default=None)
@click.option("--max-states", default=10000, show_default=True)
@click.option("--max-depth", default=None, type=int)
@click.option("--normalize-keys/--raw-keys", default=True, show_default=True)
@click.option("--seed", default=None, type=int,
              help="shuffle move processing order (schedule-independence checks)")
def check(net_file, kind, target, history, level, transition, places,
          mode, semantics, max_states, max_depth, normalize_keys, seed):
    """Check a behavioural property; exit 1 when it does not hold."""
    net = _load(net_file)
    semantics = _apply_mode(net, mode, semantics)
    try:
        pattern = MarkingPattern.from_dict(json.loads(target)) if target else None
        hist = None
        if history:
            hist = tuple(sorted(
                (t, tuple(sorted(ks))) for t, ks in json.loads(history).items()
            ))
        query = PropertyQuery(
            kind=kind,
            target_marking=pattern,
            target_history=hist,
            ignore_history=hist is None,
            level=level,
            transition=transition,
            place_set=tuple(places.split(",")) if places else (),
        )
    except (json.JSONDecodeError, NetError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    lts = build_lts(
        net, net.initial_state(),
        _bounds(max_states, max_depth, semantics, MIXED, normalize_keys, seed),
    )
    verdict = check_property_on(net, lts, query)
    qual = " (bounded exploration, qualified)" if verdict.qualified else ""
    click.echo(f"{kind}: {'holds' if verdict.holds else 'violated'}{qual}")
    if verdict.detail:
        click.echo(f"  {verdict.detail}")
    sys.exit(0 if verdict.holds else 1)


@main.command()
@click.argument("net_file", type=click.Path(exists=True))
@click.argument("out_file", type=click.Path())
def expand(net_file, out_file):
    """Expand a variable-mode net into its equivalent ground net."""
    net = _load(net_file)
    try:
        ground = expand_to_ground(net)
    except NetError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    save_net(ground, out_file)
    click.echo(
        f"wrote {out_file}: {len(ground.transitions)} ground transitions"
    )


@main.command()
@click.argument("net_file", type=click.Path(exists=True))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8432, show_default=True)
def serve(net_file, host, port):
    """Start the interactive stepping service preloaded with a net."""
    import uvicorn

    from .server import create_app

    net = _load(net_file)
    app = create_app(preloaded=net)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
