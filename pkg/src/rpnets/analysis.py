"""Bounded state-space construction and behavioural analysis.

Builds labelled transition systems by breadth-first exploration with
deterministic state identifiers, compares two systems up to isomorphism of
their reachable parts, expands a variable net into an equivalent ground net
(one transition per type-respecting instance tuple), extracts causal paths,
decides causal equivalence of states, and checks behavioural properties
(reachability, coverability, home state, liveness levels, deadlock,
persistence, behavioural siphons and traps) over the explored graph.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Optional

from .core import (
    ArcLabel,
    Bond,
    GROUND,
    NetDef,
    NetError,
    TokenInstance,
    TokenType,
    Transition,
    VARIABLE,
    validate_net,
)
from .state import State
from .stepping import MIXED, apply_move, moves

OCCURRENCE_LABELS = "occurrence"  # edge label (t, key, direction)
BINDING_LABELS = "binding"  # edge label (t, bound token bases, direction)


@dataclass(frozen=True)
class ExplorationBounds:
    max_states: int = 10000
    max_depth: Optional[int] = None
    semantics: Optional[str] = None  # defaults to the net's declared one
    direction: str = MIXED  # or FORWARD_ONLY
    normalize_keys: bool = False  # quotient key drift for reversible cycles
    label_mode: str = OCCURRENCE_LABELS
    seed: Optional[int] = None  # shuffles move processing order; the explored
    # state set must not depend on it

    def __post_init__(self):
        if self.max_states <= 0 or (self.max_depth is not None and self.max_depth <= 0):
            raise NetError("exploration bounds must be positive")


@dataclass
class Lts:
    """Event-labelled reachable state graph with canonical integer ids."""

    net: NetDef
    initial: int
    states: list  # id -> State payload
    edges: list  # (src id, label, dst id)
    truncated: bool = False
    semantics: str = "causal"
    direction: str = MIXED
    normalize_keys: bool = False

    def successors(self, sid: int):
        for src, label, dst in self.edges:
            if src == sid:
                yield label, dst

    def edge_count(self) -> int:
        return len(self.edges)

    def labels(self) -> list:
        return sorted({label for _, label, _ in self.edges}, key=repr)


def build_lts(net: NetDef, initial: State, bounds: ExplorationBounds) -> Lts:
    """BFS over the chosen firing relations up to the bounds; states are
    deduplicated by canonical form (marking + history, memories included in
    variable mode) and numbered in discovery order."""
    semantics = bounds.semantics or net.default_semantics
    lts = Lts(
        net,
        0,
        [initial],
        [],
        semantics=semantics,
        direction=bounds.direction,
        normalize_keys=bounds.normalize_keys,
    )
    rng = None if bounds.seed is None else __import__("random").Random(bounds.seed)
    seen = {initial.lts_key(net, bounds.normalize_keys): 0}
    frontier = [(0, initial, 0)]
    while frontier:
        next_frontier = []
        for sid, state, depth in frontier:
            if bounds.max_depth is not None and depth >= bounds.max_depth:
                lts.truncated = True
                continue
            available = moves(net, state, semantics, bounds.direction)
            if rng is not None:
                rng.shuffle(available)
            for move in available:
                succ = apply_move(net, state, move, semantics)
                key = succ.lts_key(net, bounds.normalize_keys)
                tid = seen.get(key)
                if tid is None:
                    if len(lts.states) >= bounds.max_states:
                        lts.truncated = True
                        continue
                    tid = len(lts.states)
                    seen[key] = tid
                    lts.states.append(succ)
                    next_frontier.append((tid, succ, depth + 1))
                label = (
                    move.binding_label()
                    if bounds.label_mode == BINDING_LABELS
                    else move.label()
                )
                lts.edges.append((sid, label, tid))
        frontier = next_frontier
    return lts


# -- isomorphism of reachable parts -------------------------------------------


def lts_isomorphic_reachable(A: Lts, B: Lts) -> Optional[tuple]:
    """Search for bijections (beta on states, eta on edge labels) with
    beta(initial)=initial and label-respecting edge correspondence; returns
    (beta, eta) or None.  Requires both inputs untruncated."""
    if A.truncated or B.truncated:
        raise NetError("isomorphism check requires fully explored inputs")
    if len(A.states) != len(B.states) or len(A.edges) != len(B.edges):
        return None

    def label_counts(lts):
        counts = {}
        for _, label, _ in lts.edges:
            counts[label] = counts.get(label, 0) + 1
        return counts

    counts_a, counts_b = label_counts(A), label_counts(B)
    if sorted(counts_a.values()) != sorted(counts_b.values()):
        return None

    def degree_sig(lts):
        outd = [0] * len(lts.states)
        ind = [0] * len(lts.states)
        for s, _, t in lts.edges:
            outd[s] += 1
            ind[t] += 1
        return [(outd[i], ind[i]) for i in range(len(lts.states))]

    sig_a, sig_b = degree_sig(A), degree_sig(B)
    if sorted(sig_a) != sorted(sig_b):
        return None

    out_a = {i: [] for i in range(len(A.states))}
    for idx, (s, label, t) in enumerate(A.edges):
        out_a[s].append((idx, label, t))
    out_b = {i: [] for i in range(len(B.states))}
    for idx, (s, label, t) in enumerate(B.edges):
        out_b[s].append((idx, label, t))

    # order A's edges by BFS discovery so targets are mapped incrementally
    ordered = []
    seen = {A.initial}
    queue = [A.initial]
    while queue:
        s = queue.pop(0)
        for idx, label, t in out_a[s]:
            ordered.append((s, label, t, idx))
            if t not in seen:
                seen.add(t)
                queue.append(t)
    if len(seen) != len(A.states):
        return None  # unreachable states would make ids meaningless

    beta = {A.initial: B.initial}
    used_states = {B.initial}
    eta: dict = {}
    eta_inv: dict = {}
    used_edges = set()

    def match(i) -> bool:
        if i == len(ordered):
            return True
        s, label, t, _ = ordered[i]
        bs = beta[s]
        for idx_b, label_b, tb in out_b[bs]:
            if idx_b in used_edges:
                continue
            if label in eta:
                if eta[label] != label_b:
                    continue
            elif label_b in eta_inv:
                continue
            elif counts_a[label] != counts_b[label_b]:
                continue
            if t in beta:
                if beta[t] != tb:
                    continue
                new_state = False
            else:
                if tb in used_states or sig_a[t] != sig_b[tb]:
                    continue
                new_state = True
            bound_label = label not in eta
            if bound_label:
                eta[label] = label_b
                eta_inv[label_b] = label
            if new_state:
                beta[t] = tb
                used_states.add(tb)
            used_edges.add(idx_b)
            if match(i + 1):
                return True
            used_edges.discard(idx_b)
            if new_state:
                del beta[t]
                used_states.discard(tb)
            if bound_label:
                del eta[label]
                del eta_inv[label_b]
        return False

    if not match(0):
        return None
    return dict(beta), dict(eta)


# -- variable-to-ground expansion ----------------------------------------------


def expand_to_ground(net: NetDef) -> NetDef:
    """One ground transition per type-respecting injective tuple of token
    instances over the guard variables; arcs instantiated accordingly and the
    initial marking copied with unique token names."""
    if net.mode != VARIABLE:
        raise NetError("expansion applies to variable-mode nets")
    for t in net.transitions.values():
        if t.forward_condition is not None or t.reverse_condition is not None:
            raise NetError("expansion of conditional transitions is not supported")

    ground_name = {}
    token_types = {}
    for tok in net.instances():
        gname = tok.base_id
        ground_name[tok.base] = gname
        token_types[gname] = TokenType(gname, net.token_types[tok.typ].data_type)

    by_type: dict = {}
    for tok in net.instances():
        by_type.setdefault(tok.typ, []).append(ground_name[tok.base])

    transitions = {}
    for name in sorted(net.transitions):
        t = net.transitions[name]
        gvars = sorted(set(t.guard_variables()) | set(t.effect_variables()))
        pools = [by_type.get(net.type_of_variable(t, v), []) for v in gvars]
        for combo in itertools.product(*pools):
            if len(set(combo)) != len(combo):
                continue
            subst = dict(zip(gvars, combo))
            tname = name if not gvars else f"{name}__{'__'.join(combo)}"

            def instantiate(label: ArcLabel) -> ArcLabel:
                return ArcLabel.make(
                    [subst[v] for v in label.variables],
                    [(subst[u], subst[v]) for u, v in label.bonds],
                )

            transitions[tname] = Transition(
                tname,
                {p: instantiate(l) for p, l in t.incoming.items()},
                {p: instantiate(l) for p, l in t.outgoing.items()},
                {subst[v]: subst[v] for v in gvars},
            )

    initial_tokens = {}
    initial_bonds = {}
    for place in net.places:
        initial_tokens[place] = frozenset(
            TokenInstance(ground_name[tok.base], 1)
            for tok in net.initial_tokens.get(place, ())
        )
        initial_bonds[place] = frozenset(
            Bond(
                TokenInstance(ground_name[b.a.base], 1),
                TokenInstance(ground_name[b.b.base], 1),
            )
            for b in net.initial_bonds.get(place, ())
        )

    expanded = NetDef(
        name=f"{net.name}-ground",
        mode=GROUND,
        token_types=token_types,
        places=net.places,
        transitions=transitions,
        initial_tokens=initial_tokens,
        initial_bonds=initial_bonds,
        data_values={
            (ground_name[base], 1): v for base, v in net.data_values.items()
        },
        default_semantics=net.default_semantics,
    )
    issues = validate_net(expanded)
    if issues:
        raise NetError("expansion produced an ill-formed net: " + "; ".join(issues))
    return expanded


# -- causal paths and equivalence ----------------------------------------------


def direct_dependence(net: NetDef, state: State) -> frozenset:
    """Direct causal pairs among live occurrences."""
    if net.mode == GROUND:
        return state.causal_order
    pairs = set()
    occs = state.occurrences()
    key_of = {o.key: o for o in occs}
    for _, tok in state.tokens():
        live = sorted(k for k, _ in tok.memory if k in key_of)
        for i, k1 in enumerate(live):
            for k2 in live[i + 1 :]:
                pairs.add((key_of[k1], key_of[k2]))
    return frozenset(pairs)


def causal_paths(net: NetDef, state: State) -> frozenset:
    """Maximal chains under the direct dependence relation."""
    pairs = direct_dependence(net, state)
    succs: dict = {}
    have_pred = set()
    for a, b in pairs:
        succs.setdefault(a, []).append(b)
        have_pred.add(b)
    paths = set()

    def extend(path):
        tail = path[-1]
        nxt = succs.get(tail)
        if not nxt:
            paths.add(tuple(path))
            return
        for b in sorted(nxt, key=lambda o: o.key):
            extend(path + [b])

    for occ in state.occurrences():
        if occ not in have_pred:
            extend([occ])

    def subsequence(short, long):
        it = iter(long)
        return all(any(o == x for x in it) for o in short)

    maximal = {
        p for p in paths
        if not any(q != p and subsequence(p, q) for q in paths)
    }
    return frozenset(maximal)


def _all_chain_labels(net: NetDef, state: State) -> tuple:
    """Multiset of transition-name sequences over every causal chain (keys
    are abstracted away, multiplicities kept)."""
    pairs = direct_dependence(net, state)
    succs: dict = {}
    for a, b in pairs:
        succs.setdefault(a, []).append(b)
    memo: dict = {}

    def chains(occ):
        if occ in memo:
            return memo[occ]
        out = {(occ.transition,): 1}
        for b in succs.get(occ, ()):
            for tail, n in chains(b).items():
                ext = (occ.transition,) + tail
                out[ext] = out.get(ext, 0) + n
        memo[occ] = out
        return out

    counts: dict = {}
    for occ in state.occurrences():
        for labels, n in chains(occ).items():
            counts[labels] = counts.get(labels, 0) + n
    return tuple(sorted(counts.items()))


def histories_causally_equivalent(net: NetDef, s1: State, s2: State) -> bool:
    return _all_chain_labels(net, s1) == _all_chain_labels(net, s2)


def _token_profile(state: State, tok: TokenInstance) -> tuple:
    recs = []
    for k, v in tok.memory:
        if v is None:
            continue
        t = state.transition_of_key(k)
        if t is not None:
            recs.append((t, v))
    return (tok.typ, tuple(sorted(recs)))


def _marking_record_profile(net: NetDef, state: State):
    """Per place: the multiset of per-token profiles (type plus the live
    transition/variable participations in its memory) and of bond-endpoint
    profile pairs."""
    profile = {}
    for place in sorted(state.marking):
        content = state.marking[place]
        tokens = tuple(sorted(_token_profile(state, t) for t in content.tokens))
        bonds = tuple(
            sorted(
                tuple(sorted((_token_profile(state, b.a), _token_profile(state, b.b))))
                for b in content.bonds
            )
        )
        profile[place] = (tokens, bonds)
    return profile


def markings_causally_equivalent(net: NetDef, s1: State, s2: State) -> bool:
    """Identical token/bond distribution per place up to renaming of
    same-typed instances, with matched tokens having participated in the
    same transitions under the same variables (keys may differ)."""
    return _marking_record_profile(net, s1) == _marking_record_profile(net, s2)


def states_causally_equivalent(net: NetDef, s1: State, s2: State) -> bool:
    return markings_causally_equivalent(net, s1, s2) and histories_causally_equivalent(
        net, s1, s2
    )


# -- behavioural properties ------------------------------------------------------


@dataclass(frozen=True)
class MarkingPattern:
    """A marking target: per place, sorted token ids and bond id pairs."""

    places: tuple  # ((place, (token ids...), ((id, id)...)), ...) non-empty only

    @staticmethod
    def of_state(state: State, net: NetDef) -> "MarkingPattern":
        entries = []
        for place in sorted(state.marking):
            content = state.marking[place]
            if content.empty:
                continue
            toks, bonds = _ground_ids(net, state, place)
            entries.append((place, toks, bonds))
        return MarkingPattern(tuple(entries))

    @staticmethod
    def from_dict(doc: Mapping) -> "MarkingPattern":
        entries = []
        for place in sorted(doc):
            toks = []
            bonds = []
            for item in doc[place]:
                if "-" in item:
                    a, b = item.split("-", 1)
                    bonds.append(tuple(sorted((a.strip(), b.strip()))))
                    toks.extend([a.strip(), b.strip()])
                else:
                    toks.append(item.strip())
            entries.append((place, tuple(sorted(set(toks))), tuple(sorted(set(bonds)))))
        return MarkingPattern(tuple(e for e in entries if e[1] or e[2]))


def _ground_ids(net: NetDef, state: State, place: str):
    content = state.marking[place]
    toks = tuple(
        sorted(
            t.typ if net.mode == GROUND else t.base_id for t in content.tokens
        )
    )
    def bid(tok):
        return tok.typ if net.mode == GROUND else tok.base_id
    bonds = tuple(
        sorted(tuple(sorted((bid(b.a), bid(b.b)))) for b in content.bonds)
    )
    return toks, bonds


def marking_matches(net: NetDef, state: State, pattern: MarkingPattern) -> bool:
    wanted = {p: (t, b) for p, t, b in pattern.places}
    for place in state.marking:
        toks, bonds = _ground_ids(net, state, place)
        want = wanted.get(place, ((), ()))
        if (toks, bonds) != want:
            return False
    return True


@dataclass(frozen=True)
class PropertyQuery:
    kind: str  # reachability|coverability|homeState|liveness|deadlock|persistence|siphon|trap
    target_marking: Optional[MarkingPattern] = None
    target_history: Optional[tuple] = None  # ((transition, (keys...)), ...)
    ignore_history: bool = True
    level: int = 1  # liveness level 0..4
    transition: Optional[str] = None  # liveness target; None = all
    place_set: tuple = ()  # siphon/trap

    def __post_init__(self):
        if self.kind in ("reachability", "coverability", "homeState"):
            if self.target_marking is None:
                raise NetError(f"{self.kind} query needs a target")
        if self.kind in ("siphon", "trap") and not self.place_set:
            raise NetError(f"{self.kind} query needs a place set")


@dataclass
class PropertyVerdict:
    holds: bool
    qualified: bool  # True when the exploration hit a bound
    witness: Optional[object] = None
    counterexample: Optional[object] = None
    detail: str = ""


def _history_tuple(state: State) -> tuple:
    return tuple(
        (t, tuple(sorted(ks))) for t, ks in sorted(state.history.items()) if ks
    )


def _history_covers(big: State, small: Optional[tuple]) -> bool:
    if small is None:
        return True
    for t, keys in small:
        have = big.history.get(t, frozenset())
        if not set(keys) <= set(have):
            return False
    return True


def _type_counts(net: NetDef, state: State, place: str) -> dict:
    counts: dict = {}
    for tok in state.marking[place].tokens:
        counts[tok.typ] = counts.get(tok.typ, 0) + 1
    return counts


def _pattern_type_counts(net: NetDef, pattern: MarkingPattern) -> dict:
    def typ_of(ident: str) -> str:
        if net.mode == GROUND:
            return ident
        return ident.rsplit("_", 1)[0]

    out = {}
    for place, toks, _ in pattern.places:
        counts: dict = {}
        for ident in toks:
            t = typ_of(ident)
            counts[t] = counts.get(t, 0) + 1
        out[place] = counts
    return out


def check_property(net: NetDef, query: PropertyQuery, bounds: ExplorationBounds) -> PropertyVerdict:
    lts = build_lts(net, net.initial_state(), bounds)
    return check_property_on(net, lts, query)


def check_property_on(net: NetDef, lts: Lts, query: PropertyQuery) -> PropertyVerdict:
    qualified = lts.truncated
    states = lts.states
    succ: dict = {i: [] for i in range(len(states))}
    pred: dict = {i: [] for i in range(len(states))}
    for s, label, t in lts.edges:
        succ[s].append((label, t))
        pred[t].append((label, s))

    def matches(sid) -> bool:
        state = states[sid]
        if not marking_matches(net, state, query.target_marking):
            return False
        if query.ignore_history:
            return True
        return _history_tuple(state) == tuple(query.target_history or ())

    if query.kind == "reachability":
        for sid in range(len(states)):
            if matches(sid):
                return PropertyVerdict(True, qualified, witness=sid)
        return PropertyVerdict(False, qualified, detail="target not reached")

    if query.kind == "coverability":
        wanted = _pattern_type_counts(net, query.target_marking)
        for sid, state in enumerate(states):
            ok = True
            for place, counts in wanted.items():
                have = _type_counts(net, state, place)
                if any(have.get(t, 0) < n for t, n in counts.items()):
                    ok = False
                    break
            if ok and not query.ignore_history:
                ok = _history_covers(state, query.target_history)
            if ok:
                return PropertyVerdict(True, qualified, witness=sid)
        return PropertyVerdict(False, qualified, detail="target not coverable")

    if query.kind == "homeState":
        home = {sid for sid in range(len(states)) if matches(sid)}
        if not home:
            return PropertyVerdict(False, qualified, detail="target never reached")
        can_reach = set(home)
        stack = list(home)
        while stack:
            sid = stack.pop()
            for _, p in pred[sid]:
                if p not in can_reach:
                    can_reach.add(p)
                    stack.append(p)
        missing = [sid for sid in range(len(states)) if sid not in can_reach]
        if missing:
            return PropertyVerdict(False, qualified, counterexample=missing[0])
        return PropertyVerdict(True, qualified, witness=sorted(home)[0])

    if query.kind == "deadlock":
        for sid in range(len(states)):
            if not succ[sid]:
                return PropertyVerdict(True, qualified, witness=sid)
        return PropertyVerdict(False, qualified, detail="no sink state found")

    if query.kind == "liveness":
        names = [query.transition] if query.transition else sorted(net.transitions)
        for name in names:
            lvl = liveness_level(net, lts, name)
            if lvl < query.level:
                return PropertyVerdict(
                    False,
                    qualified,
                    counterexample=name,
                    detail=f"{name} is only L{lvl}-live",
                )
        return PropertyVerdict(True, qualified)

    if query.kind == "persistence":
        for sid, state in enumerate(states):
            by_transition: dict = {}
            for label, t in succ[sid]:
                by_transition.setdefault((label[0], label[2]), []).append(t)
            keys = sorted(by_transition)
            for (t1, d1) in keys:
                for (t2, d2) in keys:
                    if t1 == t2:
                        continue
                    for dst in by_transition[(t1, d1)]:
                        still = any(
                            (label[0], label[2]) == (t2, d2) for label, _ in succ[dst]
                        )
                        if not still:
                            return PropertyVerdict(
                                False,
                                qualified,
                                counterexample=(sid, (t1, d1), (t2, d2)),
                                detail=f"firing {t1} ({d1}) at state {sid} disables {t2} ({d2})",
                            )
        return PropertyVerdict(True, qualified)

    if query.kind in ("siphon", "trap"):
        wanted = set(query.place_set)

        def marked(state) -> bool:
            return any(state.marking[p].tokens for p in wanted if p in state.marking)

        for sid, state in enumerate(states):
            if query.kind == "siphon" and not marked(state):
                for label, t in succ[sid]:
                    if marked(states[t]):
                        return PropertyVerdict(
                            False, qualified, counterexample=(sid, label, t)
                        )
            if query.kind == "trap" and marked(state):
                for label, t in succ[sid]:
                    if not marked(states[t]):
                        return PropertyVerdict(
                            False, qualified, counterexample=(sid, label, t)
                        )
        return PropertyVerdict(True, qualified)

    raise NetError(f"unknown property kind {query.kind}")


def liveness_level(net: NetDef, lts: Lts, name: str) -> int:
    """Highest k in the L0..L4 ladder for transition ``name`` on the graph.

    L1: fires somewhere reachable; L2/L3: firings unbounded along some path
    (a reachable cycle through a firing); L4: from every reachable state a
    firing of the transition is still reachable.
    """
    succ: dict = {i: [] for i in range(len(lts.states))}
    for s, label, t in lts.edges:
        succ[s].append((label, t))
    firing_edges = [
        (s, t) for s, label, t in lts.edges if label[0] == name and label[2] == "forward"
    ]
    if not firing_edges:
        return 0
    # L4: every state can reach a state with an outgoing firing of the transition
    sources = {s for s, _ in firing_edges}
    can_fire = set(sources)
    pred: dict = {i: [] for i in range(len(lts.states))}
    for s, _, t in lts.edges:
        pred[t].append(s)
    stack = list(sources)
    while stack:
        sid = stack.pop()
        for p in pred[sid]:
            if p not in can_fire:
                can_fire.add(p)
                stack.append(p)
    if len(can_fire) == len(lts.states):
        return 4
    # L2/L3: a cycle containing a firing edge, reachable from the initial state
    # (every explored state is reachable), detected via strongly-connected
    # components over the full edge set.
    index = _tarjan_components(len(lts.states), lts.edges)
    for s, t in firing_edges:
        if index[s] == index[t]:
            return 3
    # firing edges across components cannot repeat (the condensation is
    # acyclic), so anything left is fireable only boundedly often
    return 1


def _tarjan_components(n: int, edges) -> list:
    adj: dict = {i: [] for i in range(n)}
    for s, _, t in edges:
        adj[s].append(t)
    index = [-1] * n
    low = [0] * n
    comp = [-1] * n
    counter = itertools.count()
    comp_counter = itertools.count()
    stack: list = []
    on_stack = [False] * n

    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            node, pi = work[-1]
            if pi == 0:
                index[node] = low[node] = next(counter)
                stack.append(node)
                on_stack[node] = True
            advanced = False
            for j in range(pi, len(adj[node])):
                nxt = adj[node][j]
                if index[nxt] == -1:
                    work[-1] = (node, j + 1)
                    work.append((nxt, 0))
                    advanced = True
                    break
                if on_stack[nxt]:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if low[node] == index[node]:
                cid = next(comp_counter)
                while True:
                    top = stack.pop()
                    on_stack[top] = False
                    comp[top] = cid
                    if top == node:
                        break
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return comp


# -- textual exports --------------------------------------------------------------


def export_lts_lines(lts: Lts) -> list:
    """Line-based export: ``STATE <id> <canonical-json>`` then ``EDGE`` rows."""
    import json

    lines = []
    net = lts.net
    for sid, state in enumerate(lts.states):
        doc = {
            "marking": {
                place: sorted(
                    [t.typ if net.mode == GROUND else t.base_id for t in c.tokens]
                    + [
                        "-".join(
                            sorted(
                                (
                                    b.a.typ if net.mode == GROUND else b.a.base_id,
                                    b.b.typ if net.mode == GROUND else b.b.base_id,
                                )
                            )
                        )
                        for b in c.bonds
                    ]
                )
                for place, c in sorted(state.marking.items())
                if not c.empty
            },
            "history": {t: sorted(ks) for t, ks in sorted(state.history.items()) if ks},
        }
        tag = " INITIAL" if sid == lts.initial else ""
        lines.append(f"STATE {sid} {json.dumps(doc, sort_keys=True)}{tag}")
    for s, label, t in lts.edges:
        name, key, direction = label[0], label[1], label[2]
        lines.append(f"EDGE {s} {name}:{key}:{direction} {t}")
    if lts.truncated:
        lines.append("TRUNCATED")
    return lines


def export_lts_dot(lts: Lts) -> str:
    out = ["digraph lts {"]
    out.append('  rankdir=LR; node [shape=circle, fontsize=10];')
    for sid in range(len(lts.states)):
        shape = "doublecircle" if sid == lts.initial else "circle"
        out.append(f'  s{sid} [label="{sid}", shape={shape}];')
    for s, label, t in lts.edges:
        name, key, direction = label[0], label[1], label[2]
        style = ' style=dashed' if direction != "forward" else ""
        out.append(f'  s{s} -> s{t} [label="{name}:{key}"{style}];')
    out.append("}")
    return "\n".join(out)
