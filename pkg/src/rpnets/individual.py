"""Firing rules under the individual token interpretation.

Forward execution moves selected token instances together with their
connected components, extending each moved token's memory with the fresh
occurrence key.  Three reversal relations are provided: backtracking (only
the globally latest occurrence), causal order (any occurrence with no live
dependents), and out-of-causal order (any executed occurrence whose bond
effects survive), the latter relocating split components to the outgoing
place of the last live occurrence that manipulated them.

Ground-mode nets (unique tokens named on the arcs, optional negative
labels) run through the same machinery with singleton-typed variables; their
causal-dependence relation is maintained incrementally on the state from the
marking at firing time, while variable-mode nets derive dependence from
token memories.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .core import (
    Bond,
    GROUND,
    NetDef,
    NetError,
    TokenInstance,
    Transition,
    components,
    connected,
)
from .state import Occurrence, PlaceContent, State

FORWARD = "forward"
BACKTRACK = "backtrack"
CAUSAL = "causal"
OUT_OF_CAUSAL = "out-of-causal"
COLLECTIVE = "collective"

REVERSE_SEMANTICS = (BACKTRACK, CAUSAL, OUT_OF_CAUSAL, COLLECTIVE)


@dataclass(frozen=True)
class EnablingAssignment:
    """An injective, type-respecting binding of arc variables to tokens."""

    bindings: tuple  # sorted tuple of (variable, TokenInstance)
    direction: str = FORWARD

    @staticmethod
    def make(mapping: Mapping[str, TokenInstance], direction: str = FORWARD):
        return EnablingAssignment(tuple(sorted(mapping.items())), direction)

    def as_dict(self) -> dict:
        return dict(self.bindings)

    def __getitem__(self, var: str) -> TokenInstance:
        for v, tok in self.bindings:
            if v == var:
                return tok
        raise KeyError(var)

    def base_signature(self) -> tuple:
        return tuple((v, tok.base) for v, tok in self.bindings)

    def __repr__(self):
        inner = ", ".join(f"{v}={tok!r}" for v, tok in self.bindings)
        return f"[{inner}]"


@dataclass(frozen=True)
class FiringRecord:
    """What one live occurrence did, reconstructed from token memories."""

    occurrence: Occurrence
    assignment: EnablingAssignment
    bonds_created: frozenset  # frozensets of two token bases
    bonds_destroyed: frozenset


def _require_transition(net: NetDef, name: str) -> Transition:
    try:
        return net.transitions[name]
    except KeyError:
        raise NetError(f"unknown transition {name}") from None


def _pre_post_bonds(t: Transition, binding: Mapping[str, TokenInstance]):
    pre = frozenset(Bond(binding[u], binding[v]) for u, v in t.guard_bonds())
    post = frozenset(Bond(binding[u], binding[v]) for u, v in t.effect_bonds())
    return pre, post


def _negative_labels_ok(net: NetDef, state: State, t: Transition) -> bool:
    for place in sorted(t.incoming):
        lab = t.incoming[place]
        content = state.marking[place]
        for typ in lab.negative_tokens:
            if any(tok.typ == typ for tok in content.tokens):
                return False
        for a, b in lab.negative_bonds:
            for bond in content.bonds:
                if {bond.a.typ, bond.b.typ} == {a, b}:
                    return False
    return True


def enabled_forward(net: NetDef, state: State, name: str) -> list:
    """All forward enabling assignments of transition ``name``, in a
    deterministic (variable-then-instance lexicographic) order."""
    t = _require_transition(net, name)
    if net.mode == GROUND and not _negative_labels_ok(net, state, t):
        return []

    variables = []
    for place in sorted(t.incoming):
        for v in t.incoming[place].variables:
            variables.append((v, place))
    variables.sort()

    results = []

    def extend(i, binding):
        if i == len(variables):
            if _no_cloning(net, state, t, binding):
                results.append(EnablingAssignment.make(binding, FORWARD))
            return
        var, place = variables[i]
        typ = net.type_of_variable(t, var)
        content = state.marking[place]
        lab = t.incoming[place]
        used = set(binding.values())
        for tok in sorted(content.tokens, key=lambda x: x.base):
            if tok.typ != typ or tok in used:
                continue
            binding[var] = tok
            if _arc_bonds_ok(state, t, binding, var, place, lab):
                extend(i + 1, binding)
            del binding[var]

    extend(0, {})
    return results


def _arc_bonds_ok(state, t, binding, var, place, lab) -> bool:
    """Check bond requirements involving ``var`` against already-bound
    variables of the same incoming arc: required bonds present, and no bond
    between selected co-located tokens that the arc does not carry."""
    content = state.marking[place]
    tok = binding[var]
    for u, v in lab.bonds:
        if var not in (u, v):
            continue
        other = v if u == var else u
        if other in binding:
            if Bond(tok, binding[other]) not in content.bonds:
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


def _no_cloning(net, state, t, binding) -> bool:
    """Tokens routed to distinct out-places must be disconnected once the
    guard bonds are replaced by the effect bonds."""
    routed = [(u, t.out_place_of(u)) for u in t.effect_variables()]
    places = {p for _, p in routed}
    if len(places) <= 1:
        return True
    pre_bonds, post_bonds = _pre_post_bonds(t, binding)
    pool = set()
    for place in t.incoming:
        pool.update(state.marking[place].items())
    pool -= pre_bonds
    pool.update(binding.values())
    pool.update(post_bonds)
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


def _incoming_components(state, t, binding) -> dict:
    """Per in-place, the full connected components of the selected tokens."""
    taken = {}
    for place in sorted(t.incoming):
        items = state.marking[place].items()
        comp = set()
        for u in t.incoming[place].variables:
            comp |= connected(binding[u], items)
        if comp:
            taken[place] = comp
    return taken


def _outgoing_components(state, t, binding) -> dict:
    """Per out-place, the components re-assembled over the post-firing bond
    structure (guard bonds removed, effect bonds added)."""
    pre_bonds, post_bonds = _pre_post_bonds(t, binding)
    out = {}
    for place in sorted(t.outgoing):
        comp = set()
        for u in t.outgoing[place].variables:
            tok = binding[u]
            src = None
            for x in t.incoming:
                if tok in state.marking[x].tokens:
                    src = x
                    break
            if src is None:
                raise NetError(f"stale assignment: {tok} left its place")
            pool = set(state.marking[src].items())
            pool -= pre_bonds
            pool -= set(binding.values())
            pool.update(binding.values())
            pool.update(post_bonds)
            comp |= connected(tok, pool)
        if comp:
            out[place] = comp
    return out


def _ground_causal_pairs(net, state, t, taken, key) -> set:
    """Marking-based dependence: the new occurrence depends on every live
    occurrence whose effects intersect the components consumed now."""
    used_types = set()
    used_bond_types = set()
    for comp in taken.values():
        for item in comp:
            if isinstance(item, TokenInstance):
                used_types.add(item.typ)
            else:
                used_bond_types.add(tuple(sorted((item.a.typ, item.b.typ))))
    pairs = set()
    new = Occurrence(t.name, key)
    for name in sorted(net.transitions):
        keys = state.history.get(name, frozenset())
        if not keys:
            continue
        t2 = net.transitions[name]
        effect_types = {net.type_of_variable(t2, v) for v in t2.effect_variables()}
        effect_bond_types = {
            tuple(sorted((net.type_of_variable(t2, u), net.type_of_variable(t2, v))))
            for u, v in t2.effect_bonds()
        }
        if used_types & effect_types or used_bond_types & effect_bond_types:
            for k2 in keys:
                if k2 < key:
                    pairs.add((Occurrence(name, k2), new))
    return pairs


def fire_forward(net: NetDef, state: State, name: str, asg: EnablingAssignment) -> State:
    """Execute ``name`` forward under ``asg``; returns the successor state."""
    t = _require_transition(net, name)
    binding = asg.as_dict()
    for var, tok in binding.items():
        place = t.in_place_of(var)
        if place is None or tok not in state.marking[place].tokens:
            raise NetError(f"stale assignment: {tok} not available for {var}")

    key = state.next_key()
    taken = _incoming_components(state, t, binding)
    deposited = _outgoing_components(state, t, binding)

    var_of = {tok: var for var, tok in binding.items()}
    moved = set()
    for comp in deposited.values():
        for item in comp:
            if isinstance(item, TokenInstance):
                moved.add(item)
    consumed = set()
    for comp in taken.values():
        consumed.update(i for i in comp if isinstance(i, TokenInstance))
    if consumed != moved:
        raise NetError(
            f"firing {name} would not preserve tokens: "
            f"{sorted(consumed ^ moved, key=repr)}"
        )
    rename = {tok: tok.with_record(key, var_of.get(tok)) for tok in moved}

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
                tokens.add(rename[item])
            else:
                bonds.add(item.rename(rename))
        changes[place] = PlaceContent(frozenset(tokens), frozenset(bonds))

    out = state.replace_marking(changes).with_history_key(name, key)
    if net.mode == GROUND:
        out = out.with_causal_pairs(_ground_causal_pairs(net, state, t, taken, key))
    return out


# -- reverse bindings ---------------------------------------------------------


def _reverse_binding(net, state, t, key) -> Optional[dict]:
    """Bind the effect variables for reversing occurrence (t, key): in
    variable mode to the instances whose outermost record is (key, var); in
    ground mode to the unique type instances at the out-places."""
    binding = {}
    for place in sorted(t.outgoing):
        content = state.marking[place]
        lab = t.outgoing[place]
        for var in lab.variables:
            typ = net.type_of_variable(t, var)
            cand = None
            for tok in sorted(content.tokens, key=lambda x: x.base):
                if tok.typ != typ:
                    continue
                if net.mode == GROUND:
                    cand = tok
                    break
                if tok.memory and tok.memory[-1] == (key, var):
                    cand = tok
                    break
            if cand is None:
                return None
            binding[var] = cand
        for u, v in lab.bonds:
            if Bond(binding[u], binding[v]) not in content.bonds:
                return None
    if len(set(binding.values())) != len(binding):
        return None
    return binding


def _strip_key(tok: TokenInstance, key: int) -> TokenInstance:
    if any(k == key for k, _ in tok.memory):
        return tok.drop_key(key)
    return tok


# -- backtracking -------------------------------------------------------------


def enabled_backtrack(net: NetDef, state: State) -> list:
    """The occurrence holding the globally maximal key, if reversible."""
    top = state.max_key()
    if top == 0:
        return []
    name = state.transition_of_key(top)
    t = net.transitions[name]
    binding = _reverse_binding(net, state, t, top)
    if binding is None:
        return []
    return [
        (Occurrence(name, top), EnablingAssignment.make(binding, BACKTRACK))
    ]


def fire_backtrack(
    net: NetDef, state: State, occ: Occurrence, asg: EnablingAssignment
) -> State:
    if not state.is_live(occ) or occ.key != state.max_key():
        raise NetError(f"{occ} is not bt-enabled")
    t = _require_transition(net, occ.transition)
    return _relocating_reverse(net, state, t, occ, asg.as_dict())


# -- causal order -------------------------------------------------------------


def causal_dependents(net: NetDef, state: State, occ: Occurrence) -> frozenset:
    """Live occurrences directly causally dependent on ``occ``."""
    if net.mode == GROUND:
        return frozenset(b for a, b in state.causal_order if a == occ)
    deps = set()
    for _, tok in state.tokens():
        if occ.key not in tok.keys:
            continue
        for k, _v in tok.memory:
            if k > occ.key:
                name = state.transition_of_key(k)
                if name is not None:
                    deps.add(Occurrence(name, k))
    return frozenset(deps)


def enabled_causal(net: NetDef, state: State) -> list:
    """Occurrences whose required tokens/bonds are back in the out-places and
    that no live occurrence causally depends on."""
    out = []
    for occ in state.occurrences():
        if causal_dependents(net, state, occ):
            continue
        t = net.transitions[occ.transition]
        binding = _reverse_binding(net, state, t, occ.key)
        if binding is None:
            continue
        out.append((occ, EnablingAssignment.make(binding, CAUSAL)))
    return out


def fire_causal(
    net: NetDef, state: State, occ: Occurrence, asg: EnablingAssignment
) -> State:
    if not state.is_live(occ):
        raise NetError(f"stale occurrence {occ}")
    if causal_dependents(net, state, occ):
        raise NetError(f"{occ} has live causal dependents")
    t = _require_transition(net, occ.transition)
    return _relocating_reverse(net, state, t, occ, asg.as_dict())


# -- out of causal order ------------------------------------------------------


def last_occurrence(net: NetDef, state: State, component) -> Optional[Occurrence]:
    """The latest live occurrence that actively manipulated any token of the
    component (swept-along participation does not count); None if no such
    occurrence exists."""
    best = None
    for item in component:
        if not isinstance(item, TokenInstance):
            continue
        for k, v in item.memory:
            if v is None:
                continue
            name = state.transition_of_key(k)
            if name is None:
                continue
            if best is None or k > best.key:
                best = Occurrence(name, k)
    return best


def resting_place(net: NetDef, state: State, component) -> str:
    """``last_P``: where the component belongs — the unique outgoing place of
    its last live occurrence, or its initial place if none."""
    last = last_occurrence(net, state, component)
    if last is None:
        places = set()
        for item in component:
            if isinstance(item, TokenInstance):
                places.add(net.initial_place_of(item.base))
        if len(places) != 1:
            raise NetError(
                f"unrelocatable component: initial places {sorted(places, key=str)}"
            )
        return places.pop()
    t = net.transitions[last.transition]
    places = set()
    for place in t.outgoing:
        vars_here = set(t.outgoing[place].variables)
        for item in component:
            if isinstance(item, TokenInstance):
                rec = item.record_for(last.key)
                if rec is not None and rec[1] in vars_here:
                    places.add(place)
    if len(places) != 1:
        raise NetError(
            f"unrelocatable component: {last} deposited into {sorted(places)}"
        )
    return places.pop()


def _bond_effect_witnesses(state, base_a, base_b):
    """Keys under which both bases actively participated, with the pair of
    variables they were bound to."""
    tok_a = state.instance_of_base(base_a)
    tok_b = state.instance_of_base(base_b)
    if tok_a is None or tok_b is None:
        return
    recs_b = {k: v for k, v in tok_b.memory if v is not None}
    for k, va in tok_a.memory:
        if va is None or k not in recs_b:
            continue
        if state.transition_of_key(k) is None:
            continue
        yield k, tuple(sorted((va, recs_b[k])))


def _oco_guards_ok(net, state, t, key, binding) -> bool:
    """The occurrence's bond effects must not have been undone or redone by
    a later live occurrence."""
    for u, v in sorted(t.destroyed_bonds()):
        base_a, base_b = binding[u].base, binding[v].base
        for k2, pair in _bond_effect_witnesses(state, base_a, base_b):
            if k2 <= key:
                continue
            t2 = net.transitions[state.transition_of_key(k2)]
            if pair in t2.created_bonds():
                return False
    for u, v in sorted(t.created_bonds()):
        base_a, base_b = binding[u].base, binding[v].base
        for k2, pair in _bond_effect_witnesses(state, base_a, base_b):
            if k2 <= key:
                continue
            t2 = net.transitions[state.transition_of_key(k2)]
            if pair in t2.destroyed_bonds():
                return False
    return True


def _oco_binding(net, state, t, key) -> Optional[dict]:
    """Bind effect variables to the instances that carry the (key, var)
    record anywhere in their memory, wherever they now rest."""
    binding = {}
    all_tokens = [tok for _, tok in state.tokens()]
    for var in t.effect_variables():
        typ = net.type_of_variable(t, var)
        cand = None
        for tok in all_tokens:
            if tok.typ == typ and tok.record_for(key) == (key, var):
                cand = tok
                break
        if cand is None:
            return None
        binding[var] = cand
    for place in sorted(t.outgoing):
        for u, v in t.outgoing[place].bonds:
            bond = Bond(binding[u], binding[v])
            if not any(bond in c.bonds for c in state.marking.values()):
                return None
    if len(set(binding.values())) != len(binding):
        return None
    return binding


def enabled_out_of_causal(net: NetDef, state: State) -> list:
    out = []
    for occ in state.occurrences():
        t = net.transitions[occ.transition]
        binding = _oco_binding(net, state, t, occ.key)
        if binding is None:
            continue
        if not _oco_guards_ok(net, state, t, occ.key, binding):
            continue
        out.append((occ, EnablingAssignment.make(binding, OUT_OF_CAUSAL)))
    return out


def _relocating_reverse(net, state, t, occ, binding) -> State:
    """The one reversal rule all three relations share: undo the
    occurrence's bond effects (created bonds broken, destroyed bonds
    restored), relocate every affected connected component to the outgoing
    place of its last remaining live occurrence (or its initial place), and
    trim token memories of the occurrence and of any participation later
    than the component's last.  On states reachable without out-of-order
    reversal this coincides with returning the components along the
    transition's incoming arcs."""
    key = occ.key
    after = state.without_history_key(occ.transition, key)
    pre_bonds, post_bonds = _pre_post_bonds(t, binding)
    pool = set()
    for content in state.marking.values():
        pool.update(content.tokens)
        pool.update(content.bonds)
    pool -= post_bonds
    pool.update(pre_bonds)

    marking = {place: [set(), set()] for place in state.marking}
    for comp in components(pool):
        last = last_occurrence(net, after, comp)
        dest = resting_place(net, after, comp)
        rename = {}
        for item in comp:
            if not isinstance(item, TokenInstance):
                continue
            if last is None:
                new = item.pristine()
            else:
                new = _strip_key(item.truncate_after(last.key), key)
            rename[item] = new
        for item in comp:
            if isinstance(item, TokenInstance):
                marking[dest][0].add(rename[item])
            else:
                marking[dest][1].add(item.rename(rename))

    changes = {
        place: PlaceContent(frozenset(toks), frozenset(bonds))
        for place, (toks, bonds) in marking.items()
    }
    out = after.replace_marking(changes)
    return out.without_occurrence_pairs(occ)


def fire_out_of_causal(
    net: NetDef, state: State, occ: Occurrence, asg: EnablingAssignment
) -> State:
    """Undo the occurrence's bond effects and relocate every affected
    connected component to its resting place, trimming token memories of the
    occurrence and of any participation later than the component's last live
    occurrence."""
    if not state.is_live(occ):
        raise NetError(f"stale occurrence {occ}")
    t = _require_transition(net, occ.transition)
    return _relocating_reverse(net, state, t, occ, asg.as_dict())


# -- unified stepping ---------------------------------------------------------


def enabled_reverse(net: NetDef, state: State, semantics: str) -> list:
    if semantics == BACKTRACK:
        return enabled_backtrack(net, state)
    if semantics == CAUSAL:
        return enabled_causal(net, state)
    if semantics == OUT_OF_CAUSAL:
        return enabled_out_of_causal(net, state)
    raise NetError(f"unknown reversal semantics {semantics}")


def fire_reverse(
    net: NetDef, state: State, occ: Occurrence, asg: EnablingAssignment, semantics: str
) -> State:
    if semantics == BACKTRACK:
        return fire_backtrack(net, state, occ, asg)
    if semantics == CAUSAL:
        return fire_causal(net, state, occ, asg)
    if semantics == OUT_OF_CAUSAL:
        return fire_out_of_causal(net, state, occ, asg)
    raise NetError(f"unknown reversal semantics {semantics}")


def firing_record(net: NetDef, state: State, occ: Occurrence) -> FiringRecord:
    """Reconstruct what a live occurrence did from token memories."""
    if not state.is_live(occ):
        raise NetError(f"stale occurrence {occ}")
    t = net.transitions[occ.transition]
    binding = {}
    for _, tok in state.tokens():
        rec = tok.record_for(occ.key)
        if rec is not None and rec[1] is not None:
            binding[rec[1]] = tok
    created = set()
    destroyed = set()
    for u, v in t.created_bonds():
        if u in binding and v in binding:
            created.add(frozenset((binding[u].base, binding[v].base)))
    for u, v in t.destroyed_bonds():
        if u in binding and v in binding:
            destroyed.add(frozenset((binding[u].base, binding[v].base)))
    return FiringRecord(
        occ,
        EnablingAssignment.make(binding, FORWARD),
        frozenset(created),
        frozenset(destroyed),
    )
