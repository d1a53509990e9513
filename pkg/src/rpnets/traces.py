"""Trace scripts: replayable step sequences with marking assertions.

A script is a JSON document with a ``steps`` array.  Step kinds:

- ``{"do": "fire", "transition": t, "assignment": {var: instanceId}?}``
- ``{"do": "reverse", "transition": t, "key": k?, "semantics": s?,
   "assignment": {var: instanceId}?}``
- ``{"do": "assertMarking", "marking": {place: ["id", "id1-id2", ...]}}``
  (exact: unlisted places must be empty)
- ``{"do": "assertEnabled"|"assertDisabled", "transition": t,
   "direction": "forward"|"reverse"?}``

Omitted assignments pick the first enabled one in deterministic order;
omitted reversal keys pick the latest live occurrence of the transition.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .analysis import MarkingPattern, marking_matches
from .core import NetDef, NetError
from .netfile import NetFileError, _canon_semantics
from .state import State
from .stepping import Move, apply_move, forward_moves, reverse_moves


class TraceError(NetError):
    def __init__(self, step_no: int, message: str):
        super().__init__(f"step {step_no}: {message}")
        self.step_no = step_no


@dataclass
class TraceReport:
    steps: list = field(default_factory=list)  # human-readable per-step lines
    final_state: Optional[State] = None

    def __str__(self):
        return "\n".join(self.steps)


def load_trace(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise NetFileError(f"{path}: {exc}") from None


def _assignment_matches(net: NetDef, move: Move, wanted: dict) -> bool:
    bound = {
        var: (tok.typ if net.mode == "ground" else tok.base_id)
        for var, tok in move.assignment.bindings
    }
    return all(bound.get(var) == ident for var, ident in wanted.items())


def _marking_diff(net: NetDef, state: State) -> dict:
    out = {}
    for place in sorted(state.marking):
        content = state.marking[place]
        if content.empty:
            continue
        def ident(tok):
            return tok.typ if net.mode == "ground" else tok.base_id
        items = sorted(ident(t) for t in content.tokens)
        items += sorted("-".join(sorted((ident(b.a), ident(b.b)))) for b in content.bonds)
        out[place] = items
    return out


def run_trace(net: NetDef, script: dict, state: Optional[State] = None) -> TraceReport:
    """Execute the script's steps, checking assertions; aborts with context on
    the first failed assertion or non-enabled step."""
    report = TraceReport()
    state = state or net.initial_state()
    default_semantics = _canon_semantics(
        script.get("semantics", net.default_semantics)
    )
    report.steps.append(f"initial {_marking_diff(net, state)}")

    for no, step in enumerate(script.get("steps", []), start=1):
        kind = step.get("do")
        if kind == "fire":
            name = step["transition"]
            candidates = [
                m for m in forward_moves(net, state, default_semantics)
                if m.transition == name
            ]
            wanted = step.get("assignment", {})
            candidates = [m for m in candidates if _assignment_matches(net, m, wanted)]
            if not candidates:
                raise TraceError(no, f"transition {name} is not forward-enabled here")
            move = candidates[0]
            state = apply_move(net, state, move, default_semantics)
            report.steps.append(f"fire {name}:{move.key} {move.assignment!r}")
        elif kind == "reverse":
            name = step["transition"]
            semantics = _canon_semantics(step.get("semantics", default_semantics))
            candidates = [
                m for m in reverse_moves(net, state, semantics)
                if m.transition == name
            ]
            if "key" in step:
                candidates = [m for m in candidates if m.key == step["key"]]
            else:
                live = state.history.get(name, frozenset())
                if live:
                    latest = max(live)
                    candidates = [m for m in candidates if m.key == latest]
            wanted = step.get("assignment", {})
            candidates = [m for m in candidates if _assignment_matches(net, m, wanted)]
            if not candidates:
                raise TraceError(
                    no, f"no {semantics}-enabled reversal of {name} matches"
                )
            move = candidates[0]
            state = apply_move(net, state, move, semantics)
            report.steps.append(
                f"reverse {name}:{move.key} [{semantics}] {move.assignment!r}"
            )
        elif kind == "assertMarking":
            pattern = MarkingPattern.from_dict(step["marking"])
            if not marking_matches(net, state, pattern):
                raise TraceError(
                    no,
                    "marking assertion failed:\n"
                    f"  expected {step['marking']}\n"
                    f"  actual   {_marking_diff(net, state)}",
                )
            report.steps.append("assert marking ok")
        elif kind in ("assertEnabled", "assertDisabled"):
            name = step["transition"]
            direction = step.get("direction", "forward")
            semantics = _canon_semantics(step.get("semantics", default_semantics))
            if direction == "forward":
                found = [
                    m for m in forward_moves(net, state, semantics)
                    if m.transition == name
                ]
            else:
                found = [
                    m for m in reverse_moves(net, state, semantics)
                    if m.transition == name
                ]
            if kind == "assertEnabled" and not found:
                raise TraceError(no, f"{name} should be {direction}-enabled but is not")
            if kind == "assertDisabled" and found:
                raise TraceError(no, f"{name} should not be {direction}-enabled")
            report.steps.append(f"assert {name} {kind[6:].lower()} ok")
        else:
            raise TraceError(no, f"unknown step kind {kind!r}")

    report.final_state = state
    return report
