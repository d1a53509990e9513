"""The collective token interpretation: one forward and one reverse rule.

Tokens of the same type are interchangeable; memories are never written, and
any type-correct instances resting in the out-places may reverse any
executed occurrence, subject only to the no-bond-recreation and no-cloning
guards.
"""

from __future__ import annotations

from typing import Optional

from .core import Bond, NetDef, NetError, TokenInstance, connected
from .individual import (
    COLLECTIVE,
    EnablingAssignment,
    _incoming_components,
    _pre_post_bonds,
    _require_transition,
    enabled_forward,
)
from .state import Occurrence, PlaceContent, State

__all__ = [
    "enabled_forward",
    "coll_fire_forward",
    "coll_enabled_reverse",
    "coll_enabled_reverse_all",
    "coll_fire_reverse",
]


def coll_fire_forward(net: NetDef, state: State, name: str, asg: EnablingAssignment) -> State:
    """Same relocation as the individual rule, token memories untouched."""
    t = _require_transition(net, name)
    binding = asg.as_dict()
    for var, tok in binding.items():
        place = t.in_place_of(var)
        if place is None or tok not in state.marking[place].tokens:
            raise NetError(f"stale assignment: {tok} not available for {var}")
    key = state.next_key()
    taken = _incoming_components(state, t, binding)
    deposited = _collective_move(state, t, binding, reverse=False)
    changes = _apply_move(state, taken, deposited)
    return state.replace_marking(changes).with_history_key(name, key)


def _collective_move(state, t, binding, reverse: bool) -> dict:
    """Per destination place, the components re-assembled over the adjusted
    bond structure (for reversal: effect bonds undone, guard bonds redone)."""
    pre_bonds, post_bonds = _pre_post_bonds(t, binding)
    if reverse:
        removed, added = post_bonds, pre_bonds
        arcs, sources = t.incoming, t.outgoing
    else:
        removed, added = pre_bonds, post_bonds
        arcs, sources = t.outgoing, t.incoming
    out = {}
    for place in sorted(arcs):
        comp = set()
        for u in arcs[place].variables:
            tok = binding[u]
            src = None
            for x in sources:
                if tok in state.marking[x].tokens:
                    src = x
                    break
            if src is None:
                raise NetError(f"stale assignment: {tok} left its place")
            pool = set(state.marking[src].items())
            pool -= removed
            pool.update(binding.values())
            pool.update(added)
            comp |= connected(tok, pool)
        if comp:
            out[place] = comp
    return out


def _apply_move(state, taken, deposited) -> dict:
    moved_in = set()
    for comp in taken.values():
        moved_in.update(i for i in comp if isinstance(i, TokenInstance))
    moved_out = set()
    for comp in deposited.values():
        moved_out.update(i for i in comp if isinstance(i, TokenInstance))
    if moved_in != moved_out:
        raise NetError(
            f"move would not preserve tokens: {sorted(moved_in ^ moved_out, key=repr)}"
        )
    changes = {}
    for place in set(taken) | set(deposited):
        content = state.marking[place]
        tokens = set(content.tokens)
        bonds = set(content.bonds)
        for item in taken.get(place, ()):
            if isinstance(item, TokenInstance):
                tokens.discard(item)
            else:
                bonds.discard(item)
        for item in deposited.get(place, ()):
            if isinstance(item, TokenInstance):
                tokens.add(item)
            else:
                bonds.add(item)
        changes[place] = PlaceContent(frozenset(tokens), frozenset(bonds))
    return changes


def coll_enabled_reverse(net: NetDef, state: State, occ: Occurrence) -> list:
    """All type-respecting bindings of the out-arc variables to instances in
    the out-places, regardless of memories, that recreate no bond and clone
    no token."""
    if not state.is_live(occ):
        return []
    t = _require_transition(net, occ.transition)

    variables = []
    for place in sorted(t.outgoing):
        for v in t.outgoing[place].variables:
            variables.append((v, place))
    variables.sort()

    results = []

    def extend(i, binding):
        if i == len(variables):
            if _no_reverse_cloning(state, t, binding):
                results.append(EnablingAssignment.make(binding, COLLECTIVE))
            return
        var, place = variables[i]
        typ = net.type_of_variable(t, var)
        content = state.marking[place]
        lab = t.outgoing[place]
        used = set(binding.values())
        for tok in sorted(content.tokens, key=lambda x: x.base):
            if tok.typ != typ or tok in used:
                continue
            binding[var] = tok
            if _out_arc_bonds_ok(state, t, binding, var, place, lab):
                extend(i + 1, binding)
            del binding[var]

    extend(0, {})
    return results


def coll_enabled_reverse_all(net: NetDef, state: State) -> list:
    out = []
    for occ in state.occurrences():
        for asg in coll_enabled_reverse(net, state, occ):
            out.append((occ, asg))
    return out


def _out_arc_bonds_ok(state, t, binding, var, place, lab) -> bool:
    content = state.marking[place]
    tok = binding[var]
    for u, v in lab.bonds:
        if var not in (u, v):
            continue
        other = v if u == var else u
        if other in binding and Bond(tok, binding[other]) not in content.bonds:
            return False
    for other in lab.variables:
        if other == var or other not in binding:
            continue
        pair = tuple(sorted((var, other)))
        if pair in lab.bonds:
            continue
        if Bond(tok, binding[other]) in content.bonds:
            return False
    return True


def _no_reverse_cloning(state, t, binding) -> bool:
    routed = [(u, t.in_place_of(u)) for u in t.guard_variables()]
    places = {p for _, p in routed}
    if len(places) <= 1:
        return True
    pre_bonds, post_bonds = _pre_post_bonds(t, binding)
    pool = set()
    for place in t.outgoing:
        pool.update(state.marking[place].items())
    pool -= post_bonds
    pool.update(binding.values())
    pool.update(pre_bonds)
    comp_cache = {}
    for i, (u, pu) in enumerate(routed):
        for v, pv in routed[i + 1 :]:
            if pu == pv:
                continue
            if v not in comp_cache:
                comp_cache[v] = connected(binding[v], pool)
            if binding[u] in comp_cache[v]:
                return False
    return True


def coll_fire_reverse(
    net: NetDef,
    state: State,
    occ: Occurrence,
    asg: EnablingAssignment,
    key: Optional[int] = None,
) -> State:
    """Undo the occurrence with the given instances: effect bonds undone,
    destroyed bonds restored, components moved to the in-places, the
    occurrence's key removed (by default the addressed one)."""
    if not state.is_live(occ):
        raise NetError(f"stale occurrence {occ}")
    t = _require_transition(net, occ.transition)
    binding = asg.as_dict()
    taken = {}
    for place in sorted(t.outgoing):
        items = state.marking[place].items()
        comp = set()
        for u in t.outgoing[place].variables:
            comp |= connected(binding[u], items)
        if comp:
            taken[place] = comp
    returned = _collective_move(state, t, binding, reverse=True)
    changes = _apply_move(state, taken, returned)
    removed = occ.key if key is None else key
    out = state.replace_marking(changes).without_history_key(occ.transition, removed)
    return out.without_occurrence_pairs(Occurrence(occ.transition, removed))
