"""Execution state: marking + history (+ ground-mode causal bookkeeping).

States are immutable values; every firing returns a new state.  Equality is
structural over marking, history and the stored causal order, so a forward
firing followed by its exact reversal compares equal to the original state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .core import Bond, GROUND, NetDef, NetError, TokenInstance


@dataclass(frozen=True)
class PlaceContent:
    tokens: frozenset = frozenset()
    bonds: frozenset = frozenset()

    def items(self):
        return self.tokens | self.bonds

    @property
    def empty(self) -> bool:
        return not self.tokens and not self.bonds


EMPTY_PLACE = PlaceContent()


@dataclass(frozen=True)
class Occurrence:
    """A live transition occurrence (t, k)."""

    transition: str
    key: int

    def __repr__(self):
        return f"({self.transition},{self.key})"


@dataclass(frozen=True)
class State:
    marking: Mapping[str, PlaceContent]
    history: Mapping[str, frozenset]  # transition -> set of keys
    # ground mode: direct causal-dependence pairs ((t,k) precedes (t',k'))
    causal_order: frozenset = frozenset()

    # -- construction ------------------------------------------------------

    @staticmethod
    def initial(net: NetDef) -> "State":
        marking = {}
        for place in net.places:
            toks = net.initial_tokens.get(place, frozenset())
            bonds = net.initial_bonds.get(place, frozenset())
            marking[place] = PlaceContent(frozenset(toks), frozenset(bonds))
        history = {t: frozenset() for t in net.transitions}
        return State(marking, history, frozenset())

    # -- equality / hashing -------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, State)
            and self.marking == other.marking
            and self.history == other.history
            and self.causal_order == other.causal_order
        )

    def __hash__(self):
        return hash(self.signature())

    def signature(self) -> tuple:
        mk = tuple(
            (p, tuple(sorted(c.tokens, key=repr)), tuple(sorted(c.bonds, key=repr)))
            for p, c in sorted(self.marking.items())
            if not c.empty
        )
        hist = tuple((t, tuple(sorted(ks))) for t, ks in sorted(self.history.items()) if ks)
        return (mk, hist, tuple(sorted(self.causal_order, key=repr)))

    # -- queries -------------------------------------------------------------

    def place_of(self, tok: TokenInstance) -> Optional[str]:
        for place, content in self.marking.items():
            if tok in content.tokens:
                return place
        return None

    def place_of_base(self, base: tuple) -> Optional[str]:
        for place, content in self.marking.items():
            for tok in content.tokens:
                if tok.base == base:
                    return place
        return None

    def instance_of_base(self, base: tuple) -> Optional[TokenInstance]:
        for content in self.marking.values():
            for tok in content.tokens:
                if tok.base == base:
                    return tok
        return None

    def tokens(self):
        for place in sorted(self.marking):
            for tok in sorted(self.marking[place].tokens, key=lambda t: t.base):
                yield place, tok

    def bonds(self):
        for place in sorted(self.marking):
            for bond in sorted(self.marking[place].bonds, key=repr):
                yield place, bond

    def occurrences(self) -> list:
        out = []
        for t in sorted(self.history):
            for k in sorted(self.history[t]):
                out.append(Occurrence(t, k))
        out.sort(key=lambda o: o.key)
        return out

    def max_key(self) -> int:
        keys = [k for ks in self.history.values() for k in ks]
        return max(keys) if keys else 0

    def next_key(self) -> int:
        return self.max_key() + 1

    def transition_of_key(self, key: int) -> Optional[str]:
        for t, ks in self.history.items():
            if key in ks:
                return t
        return None

    def is_live(self, occ: Occurrence) -> bool:
        return occ.key in self.history.get(occ.transition, frozenset())

    # -- functional updates --------------------------------------------------

    def replace_marking(self, changes: Mapping[str, PlaceContent]) -> "State":
        marking = dict(self.marking)
        marking.update(changes)
        return State(marking, self.history, self.causal_order)

    def with_history_key(self, transition: str, key: int) -> "State":
        history = dict(self.history)
        history[transition] = history.get(transition, frozenset()) | {key}
        return State(self.marking, history, self.causal_order)

    def without_history_key(self, transition: str, key: int) -> "State":
        ks = self.history.get(transition, frozenset())
        if key not in ks:
            raise NetError(f"({transition},{key}) is not a live occurrence")
        history = dict(self.history)
        history[transition] = ks - {key}
        return State(self.marking, history, self.causal_order)

    def with_causal_pairs(self, pairs) -> "State":
        return State(self.marking, self.history, self.causal_order | frozenset(pairs))

    def without_occurrence_pairs(self, occ: Occurrence) -> "State":
        kept = frozenset(
            (a, b) for a, b in self.causal_order if a != occ and b != occ
        )
        return State(self.marking, self.history, kept)

    # -- canonical form for exploration --------------------------------------

    def lts_key(self, net: NetDef, normalize_keys: bool = False) -> tuple:
        """Dedup key: marking + history; memories included in variable mode.

        ``normalize_keys`` renumbers the live keys order-preservingly to 1..n
        (consistently across history and memories), quotienting away key
        drift so reversible cyclic nets explore finitely.
        """
        remap = None
        if normalize_keys:
            live = sorted(k for ks in self.history.values() for k in ks)
            remap = {k: i + 1 for i, k in enumerate(live)}

        def tok_key(tok: TokenInstance):
            if net.mode == GROUND:
                return tok.base
            if remap is None:
                return (tok.typ, tok.index, tok.memory)
            mem = tuple((remap.get(k, k), v) for k, v in tok.memory)
            return (tok.typ, tok.index, mem)

        def bond_key(bond: Bond):
            return tuple(sorted((tok_key(bond.a), tok_key(bond.b))))

        mk = []
        for place in sorted(self.marking):
            content = self.marking[place]
            if content.empty:
                continue
            mk.append(
                (
                    place,
                    tuple(sorted(tok_key(t) for t in content.tokens)),
                    tuple(sorted(bond_key(b) for b in content.bonds)),
                )
            )
        if remap is None:
            hist = tuple(
                (t, tuple(sorted(ks))) for t, ks in sorted(self.history.items()) if ks
            )
        else:
            hist = tuple(
                (t, tuple(sorted(remap[k] for k in ks)))
                for t, ks in sorted(self.history.items())
                if ks
            )
        return (tuple(mk), hist)
