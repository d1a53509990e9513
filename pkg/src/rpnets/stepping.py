"""Unified move enumeration and application across semantics and conditions.

A *move* couples a direction, a transition (with occurrence key for
reversals), an enabling assignment, and the condition variable assignment
that licensed it.  Nets without conditions step through the same interface.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import collective as coll
from . import individual as ind
from .conditions import VariableAssignment, condition_holds
from .core import NetDef, NetError
from .individual import (
    BACKTRACK,
    CAUSAL,
    COLLECTIVE,
    EnablingAssignment,
    FORWARD,
    OUT_OF_CAUSAL,
)
from .state import Occurrence, State

FORWARD_ONLY = "forward-only"
MIXED = "mixed"


@dataclass(frozen=True)
class Move:
    direction: str  # forward | reverse
    transition: str
    key: int  # the key the move will create (forward) or remove (reverse)
    assignment: EnablingAssignment
    condition_assignment: Optional[VariableAssignment] = None

    @property
    def occurrence(self) -> Occurrence:
        return Occurrence(self.transition, self.key)

    def label(self) -> tuple:
        return (self.transition, self.key, self.direction)

    def binding_label(self) -> tuple:
        return (self.transition, self.assignment.base_signature(), self.direction)

    def __repr__(self):
        arrow = "+" if self.direction == "forward" else "-"
        return f"{arrow}{self.transition}:{self.key}{self.assignment!r}"


def _controlled(net, state, t, condition, binding):
    if condition is None:
        return VariableAssignment.make({})
    return condition_holds(net, state, t, condition, binding)


def forward_moves(net: NetDef, state: State, semantics: str) -> list:
    out = []
    key = state.next_key()
    for name in sorted(net.transitions):
        t = net.transitions[name]
        for asg in ind.enabled_forward(net, state, name):
            v = _controlled(net, state, t, t.forward_condition, asg.as_dict())
            if v is not None:
                out.append(Move(FORWARD, name, key, asg, v))
    return out


def reverse_moves(net: NetDef, state: State, semantics: str) -> list:
    out = []
    if semantics == COLLECTIVE:
        pairs = coll.coll_enabled_reverse_all(net, state)
    else:
        pairs = ind.enabled_reverse(net, state, semantics)
    for occ, asg in pairs:
        t = net.transitions[occ.transition]
        v = _controlled(net, state, t, t.reverse_condition, asg.as_dict())
        if v is not None:
            out.append(Move("reverse", occ.transition, occ.key, asg, v))
    return out


def moves(
    net: NetDef,
    state: State,
    semantics: Optional[str] = None,
    direction: str = MIXED,
) -> list:
    semantics = semantics or net.default_semantics
    out = forward_moves(net, state, semantics)
    if direction == MIXED:
        out.extend(reverse_moves(net, state, semantics))
    return out


def apply_move(net: NetDef, state: State, move: Move, semantics: Optional[str] = None) -> State:
    semantics = semantics or net.default_semantics
    if move.direction == FORWARD:
        if semantics == COLLECTIVE:
            return coll.coll_fire_forward(net, state, move.transition, move.assignment)
        return ind.fire_forward(net, state, move.transition, move.assignment)
    occ = move.occurrence
    if semantics == COLLECTIVE:
        return coll.coll_fire_reverse(net, state, occ, move.assignment)
    if semantics == BACKTRACK:
        return ind.fire_backtrack(net, state, occ, move.assignment)
    if semantics == CAUSAL:
        return ind.fire_causal(net, state, occ, move.assignment)
    if semantics == OUT_OF_CAUSAL:
        return ind.fire_out_of_causal(net, state, occ, move.assignment)
    raise NetError(f"unknown semantics {semantics}")
