"""Static net structure: token/bond instances, markings, histories, states.

Tokens are persistent named entities that may carry an ordered memory of
(key, variable) participation records.  Bonds are undirected pairs of token
instances.  A net is a bipartite place/transition graph whose arcs are
labelled with typed variables and variable pairs (bonds); in ground mode the
"variables" are singleton-typed token names and arcs may additionally carry
negative (absence) labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union

STAR = None  # memory record marker for tokens swept along without a variable


class NetError(Exception):
    """Raised for structurally invalid nets or illegal operations."""


@dataclass(frozen=True)
class TokenType:
    name: str
    data_type: Optional[str] = None  # tag for the scalar value carried, if any


@dataclass(frozen=True)
class TokenInstance:
    """A token: base identity plus an ordered memory of participation records.

    ``memory`` holds ``(key, variable)`` pairs with strictly increasing keys;
    ``variable`` is ``None`` for tokens swept along as part of a connected
    component without being bound to an arc variable.
    """

    typ: str
    index: int
    memory: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.typ, self.index, self.memory)))

    def __hash__(self):
        return self._hash

    @property
    def base(self) -> tuple:
        return (self.typ, self.index)

    @property
    def base_id(self) -> str:
        return f"{self.typ}_{self.index}"

    def with_record(self, key: int, var: Optional[str]) -> "TokenInstance":
        if self.memory and self.memory[-1][0] >= key:
            raise NetError(f"memory keys must increase: {self} gets key {key}")
        return TokenInstance(self.typ, self.index, self.memory + ((key, var),))

    def drop_key(self, key: int) -> "TokenInstance":
        """Remove the record carrying ``key``; error if absent."""
        if not any(k == key for k, _ in self.memory):
            raise NetError(f"no such memory record: key {key} in {self}")
        return TokenInstance(
            self.typ, self.index, tuple(r for r in self.memory if r[0] != key)
        )

    def truncate_after(self, key: int) -> "TokenInstance":
        """Keep only records with keys <= ``key``."""
        return TokenInstance(
            self.typ, self.index, tuple(r for r in self.memory if r[0] <= key)
        )

    def record_for(self, key: int) -> Optional[tuple]:
        for k, v in self.memory:
            if k == key:
                return (k, v)
        return None

    @property
    def keys(self) -> frozenset:
        return frozenset(k for k, _ in self.memory)

    def is_prefix_of(self, other: "TokenInstance") -> bool:
        """The paper's containment on instances: same base, memory a prefix."""
        return (
            self.base == other.base
            and len(self.memory) <= len(other.memory)
            and other.memory[: len(self.memory)] == self.memory
        )

    def pristine(self) -> "TokenInstance":
        return TokenInstance(self.typ, self.index, ())

    def __repr__(self):
        if not self.memory:
            return f"({self.typ},*,{self.index})"
        recs = ",".join(f"({k},{v if v is not None else '*'})" for k, v in self.memory)
        return f"({self.typ},*,{self.index})[{recs}]"


def memory_contains(a: TokenInstance, b: TokenInstance) -> bool:
    """True iff ``a``'s (base, memory) is an identical-or-prefix of ``b``'s."""
    return a.is_prefix_of(b)


def memory_drop(a: TokenInstance, key: int) -> TokenInstance:
    """Remove from ``a`` exactly the record carrying ``key``."""
    return a.drop_key(key)


@dataclass(frozen=True)
class Bond:
    """An undirected bond instance; endpoints stored canonically."""

    a: TokenInstance
    b: TokenInstance

    def __post_init__(self):
        if self.a.base == self.b.base:
            raise NetError(f"bond endpoints must be distinct tokens: {self.a}")
        if self.b.base < self.a.base:
            first, second = self.b, self.a
            object.__setattr__(self, "a", first)
            object.__setattr__(self, "b", second)
        object.__setattr__(self, "_hash", hash((Bond, self.a, self.b)))

    def __hash__(self):
        return self._hash

    @property
    def bases(self) -> frozenset:
        return frozenset((self.a.base, self.b.base))

    def endpoints(self) -> tuple:
        return (self.a, self.b)

    def other(self, tok: TokenInstance) -> TokenInstance:
        if tok == self.a:
            return self.b
        if tok == self.b:
            return self.a
        raise NetError(f"{tok} is not an endpoint of {self}")

    def rename(self, mapping: Mapping[TokenInstance, TokenInstance]) -> "Bond":
        return Bond(mapping.get(self.a, self.a), mapping.get(self.b, self.b))

    def __repr__(self):
        return f"{self.a!r}-{self.b!r}"


Item = Union[TokenInstance, Bond]


@dataclass(frozen=True)
class ArcLabel:
    """Label of one arc: variables, bonds over them, and (ground-mode,
    incoming only) negative tokens/bonds expressing required absence."""

    variables: tuple = ()
    bonds: tuple = ()  # pairs of variable names, canonically sorted
    negative_tokens: tuple = ()  # token type names (ground mode)
    negative_bonds: tuple = ()  # pairs of token type names (ground mode)

    @staticmethod
    def make(variables=(), bonds=(), negative_tokens=(), negative_bonds=()):
        return ArcLabel(
            tuple(sorted(variables)),
            tuple(sorted(tuple(sorted(p)) for p in bonds)),
            tuple(sorted(negative_tokens)),
            tuple(sorted(tuple(sorted(p)) for p in negative_bonds)),
        )

    @property
    def empty(self) -> bool:
        return not (
            self.variables or self.bonds or self.negative_tokens or self.negative_bonds
        )


@dataclass(frozen=True)
class Transition:
    name: str
    incoming: Mapping[str, ArcLabel]  # place -> label
    outgoing: Mapping[str, ArcLabel]
    variable_types: Mapping[str, str]  # variable -> token type name
    forward_condition: Optional[object] = None  # ConditionAst
    reverse_condition: Optional[object] = None
    # extra condition-only variables (not on arcs), variable -> token type
    condition_variables: Mapping[str, str] = field(default_factory=dict)

    def guard_variables(self) -> tuple:
        seen = []
        for place in sorted(self.incoming):
            for v in self.incoming[place].variables:
                if v not in seen:
                    seen.append(v)
        return tuple(seen)

    def effect_variables(self) -> tuple:
        seen = []
        for place in sorted(self.outgoing):
            for v in self.outgoing[place].variables:
                if v not in seen:
                    seen.append(v)
        return tuple(seen)

    def guard_bonds(self) -> frozenset:
        out = set()
        for lab in self.incoming.values():
            out.update(lab.bonds)
        return frozenset(out)

    def effect_bonds(self) -> frozenset:
        out = set()
        for lab in self.outgoing.values():
            out.update(lab.bonds)
        return frozenset(out)

    def created_bonds(self) -> frozenset:
        """Variable pairs bonded by this transition (in effects, not guard)."""
        return self.effect_bonds() - self.guard_bonds()

    def destroyed_bonds(self) -> frozenset:
        """Variable pairs unbonded by this transition (in guard, not effects)."""
        return self.guard_bonds() - self.effect_bonds()

    def in_place_of(self, var: str) -> Optional[str]:
        for place in sorted(self.incoming):
            if var in self.incoming[place].variables:
                return place
        return None

    def out_place_of(self, var: str) -> Optional[str]:
        for place in sorted(self.outgoing):
            if var in self.outgoing[place].variables:
                return place
        return None


GROUND = "ground"
VARIABLE = "variable"


@dataclass(frozen=True)
class NetDef:
    """A validated-on-load immutable net definition."""

    name: str
    mode: str  # GROUND or VARIABLE
    token_types: Mapping[str, TokenType]
    places: tuple
    transitions: Mapping[str, Transition]
    initial_tokens: Mapping[str, frozenset]  # place -> TokenInstance set
    initial_bonds: Mapping[str, frozenset]  # place -> Bond set
    data_values: Mapping[tuple, float] = field(default_factory=dict)  # base -> value
    default_semantics: str = "causal"
    layout: Mapping[str, tuple] = field(default_factory=dict)

    def instances(self) -> list:
        out = []
        for place in sorted(self.initial_tokens):
            out.extend(self.initial_tokens[place])
        return sorted(out, key=lambda t: t.base)

    def initial_place_of(self, base: tuple) -> Optional[str]:
        for place, toks in self.initial_tokens.items():
            for t in toks:
                if t.base == base:
                    return place
        return None

    def type_of_variable(self, t: Transition, var: str) -> str:
        if var in t.variable_types:
            return t.variable_types[var]
        if var in t.condition_variables:
            return t.condition_variables[var]
        raise NetError(f"unknown variable {var} on transition {t.name}")

    def initial_state(self):
        from .state import State  # local import to avoid a cycle

        return State.initial(self)


def connected(seed: TokenInstance, pool: Iterable[Item]) -> frozenset:
    """Tokens and bonds reachable from ``seed`` along bond paths within
    ``pool``, together with the traversed bonds; empty if seed not in pool."""
    tokens = set()
    adjacency = {}
    for item in pool:
        if isinstance(item, Bond):
            adjacency.setdefault(item.a, []).append(item)
            adjacency.setdefault(item.b, []).append(item)
        else:
            tokens.add(item)
    if seed not in tokens and seed not in adjacency:
        return frozenset()
    out = set()
    stack = [seed]
    seen = {seed}
    while stack:
        tok = stack.pop()
        if tok in tokens or tok in adjacency:
            out.add(tok)
        for bond in adjacency.get(tok, ()):
            if bond in out:
                continue
            out.add(bond)
            nxt = bond.other(tok)
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return frozenset(out)


def components(pool: Iterable[Item]) -> list:
    """Partition ``pool`` into connected components (list of frozensets)."""
    items = list(pool)
    tokens = sorted(
        (i for i in items if isinstance(i, TokenInstance)), key=lambda t: t.base
    )
    seen = set()
    result = []
    for tok in tokens:
        if tok in seen:
            continue
        comp = connected(tok, items)
        seen.update(i for i in comp if isinstance(i, TokenInstance))
        result.append(comp)
    return result


def validate_net(net: NetDef) -> list:
    """Return a list of human-readable violations; empty iff well-formed.

    Checks, per transition: token preservation (guard and effect variables
    coincide), no variable cloned onto two outgoing arcs, bond labels over
    declared variables, negative labels restricted to ground-mode incoming
    arcs, and (optionally, for nets flagged as bond-preserving) that guard
    bonds survive into the effects.  Initial-marking invariants are also
    checked: each instance in exactly one place, bond endpoints co-located,
    data values only on typed tokens.
    """
    issues = []
    for name in sorted(net.transitions):
        t = net.transitions[name]
        gvars = set(t.guard_variables())
        evars = set(t.effect_variables())
        if gvars != evars:
            missing = sorted(gvars.symmetric_difference(evars))
            issues.append(
                f"token erasure/creation: transition {name} guard and effect "
                f"variables differ on {missing}"
            )
        out_seen = {}
        for place in sorted(t.outgoing):
            for v in t.outgoing[place].variables:
                if v in out_seen and out_seen[v] != place:
                    issues.append(
                        f"cloning: variable {v} of transition {name} appears on "
                        f"outgoing arcs to both {out_seen[v]} and {place}"
                    )
                out_seen[v] = place
        for place, lab in list(t.incoming.items()) + list(t.outgoing.items()):
            if place not in net.places:
                issues.append(f"transition {name}: unknown place {place}")
            for u, v in lab.bonds:
                if u not in lab.variables or v not in lab.variables:
                    issues.append(
                        f"transition {name}: bond ({u},{v}) on arc {place} over "
                        f"variables missing from the same label"
                    )
        for v, typ in t.variable_types.items():
            if typ not in net.token_types:
                issues.append(f"transition {name}: variable {v} has unknown type {typ}")
        for place, lab in t.outgoing.items():
            if lab.negative_tokens or lab.negative_bonds:
                issues.append(
                    f"transition {name}: negative labels on outgoing arc to {place}"
                )
        if net.mode != GROUND:
            for place, lab in t.incoming.items():
                if lab.negative_tokens or lab.negative_bonds:
                    issues.append(
                        f"transition {name}: negative labels need ground mode "
                        f"(arc from {place})"
                    )

    seen_bases = {}
    for place in sorted(net.initial_tokens):
        if place not in net.places:
            issues.append(f"initial marking mentions unknown place {place}")
        for tok in net.initial_tokens[place]:
            if tok.memory:
                issues.append(f"initial token {tok} carries memory")
            if tok.base in seen_bases:
                issues.append(
                    f"token {tok.base_id} placed in both {seen_bases[tok.base]} "
                    f"and {place}"
                )
            seen_bases[tok.base] = place
            if tok.typ not in net.token_types:
                issues.append(f"initial token {tok.base_id} has unknown type {tok.typ}")
    for place in sorted(net.initial_bonds):
        toks = net.initial_tokens.get(place, frozenset())
        for bond in net.initial_bonds[place]:
            if bond.a not in toks or bond.b not in toks:
                issues.append(
                    f"initial bond {bond} at {place} lacks a co-located endpoint"
                )
    for base, value in net.data_values.items():
        if base not in seen_bases:
            issues.append(f"data value given for unknown token {base}")
    return issues


def check_bond_preservation(net: NetDef) -> list:
    """Extra well-formedness for nets that must never destroy bonds."""
    issues = []
    for name in sorted(net.transitions):
        t = net.transitions[name]
        for pair in sorted(t.destroyed_bonds()):
            issues.append(
                f"bond destruction: transition {name} consumes bond {pair} "
                f"without re-emitting it"
            )
    return issues
