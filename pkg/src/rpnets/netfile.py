"""JSON net files and trace scripts.

A net file is a JSON document declaring token types, places, initial token
instances (with optional data values and bonds), and transitions with
labelled arcs.  In variable mode arc labels name typed variables; in ground
mode they name the tokens directly (each token name becomes a singleton
type) and may also list negative tokens/bonds on incoming arcs.  Condition
strings use the expression syntax of :mod:`rpnets.conditions`; a reverse
condition given as the string ``"!forward"`` is the negation of the forward
condition.
"""

from __future__ import annotations

import json
from typing import Mapping

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

SEMANTICS_ALIASES = {
    "bt": "backtrack",
    "backtrack": "backtrack",
    "backtracking": "backtrack",
    "causal": "causal",
    "c": "causal",
    "oco": "out-of-causal",
    "out-of-causal": "out-of-causal",
    "o": "out-of-causal",
    "coll": "collective",
    "collective": "collective",
}


class NetFileError(NetError):
    """Raised for malformed or invalid net/trace files."""


def _canon_semantics(name: str) -> str:
    try:
        return SEMANTICS_ALIASES[name]
    except KeyError:
        raise NetFileError(f"unknown semantics {name!r}") from None


def _arc_label(raw: Mapping, mode: str, where: str) -> ArcLabel:
    vars_key = "vars" if "vars" in raw else "tokens"
    variables = raw.get(vars_key, [])
    bonds = [tuple(p) for p in raw.get("bonds", [])]
    neg = raw.get("absent", [])
    neg_bonds = [tuple(p) for p in raw.get("absentBonds", [])]
    for p in bonds + neg_bonds:
        if len(p) != 2:
            raise NetFileError(f"{where}: bond {p} is not a pair")
    return ArcLabel.make(variables, bonds, neg, neg_bonds)


def net_from_dict(doc: Mapping) -> NetDef:
    mode = doc.get("mode", VARIABLE)
    if mode not in (GROUND, VARIABLE):
        raise NetFileError(f"mode must be 'ground' or 'variable', got {mode!r}")
    name = doc.get("name", "net")
    places = tuple(doc.get("places", []))
    if len(set(places)) != len(places):
        raise NetFileError("duplicate place names")

    token_types = {}
    for spec in doc.get("tokenTypes", []):
        tt = TokenType(spec["name"], spec.get("dataType"))
        if tt.name in token_types:
            raise NetFileError(f"duplicate token type {tt.name}")
        token_types[tt.name] = tt

    initial_tokens: dict = {p: set() for p in places}
    data_values = {}
    by_id = {}
    for spec in doc.get("instances", []):
        typ = spec["type"]
        if mode == GROUND:
            if typ not in token_types:
                token_types[typ] = TokenType(typ, spec.get("dataType"))
        elif typ not in token_types:
            raise NetFileError(f"instance of undeclared type {typ}")
        index = int(spec.get("index", 1))
        tok = TokenInstance(typ, index)
        ident = spec.get("id", tok.base_id if mode == VARIABLE else typ)
        if ident in by_id:
            raise NetFileError(f"duplicate instance id {ident}")
        by_id[ident] = tok
        place = spec["place"]
        if place not in initial_tokens:
            raise NetFileError(f"instance {ident} placed in unknown place {place}")
        initial_tokens[place].add(tok)
        if "value" in spec:
            data_values[tok.base] = float(spec["value"])

    initial_bonds: dict = {p: set() for p in places}
    for spec in doc.get("initialBonds", []):
        a, b, place = spec["a"], spec["b"], spec["place"]
        if a not in by_id or b not in by_id:
            raise NetFileError(f"initial bond over unknown instances {a}, {b}")
        initial_bonds[place].add(Bond(by_id[a], by_id[b]))

    from .conditions import parse_condition, Negation

    transitions = {}
    for spec in doc.get("transitions", []):
        tname = spec["name"]
        if tname in transitions:
            raise NetFileError(f"duplicate transition {tname}")
        variable_types = dict(spec.get("variables", {}))
        if mode == GROUND:
            for arcs in (spec.get("in", {}), spec.get("out", {})):
                for raw in arcs.values():
                    for tok in raw.get("tokens", raw.get("vars", [])):
                        variable_types.setdefault(tok, tok)
        incoming = {
            place: _arc_label(raw, mode, f"{tname}<-{place}")
            for place, raw in spec.get("in", {}).items()
        }
        outgoing = {
            place: _arc_label(raw, mode, f"{tname}->{place}")
            for place, raw in spec.get("out", {}).items()
        }
        fwd = spec.get("forwardCondition")
        rev = spec.get("reverseCondition")
        fwd_ast = parse_condition(fwd) if fwd else None
        if rev == "!forward":
            if fwd_ast is None:
                raise NetFileError(
                    f"{tname}: reverse condition negates an absent forward condition"
                )
            rev_ast = Negation(fwd_ast)
        else:
            rev_ast = parse_condition(rev) if rev else None
        transitions[tname] = Transition(
            tname,
            incoming,
            outgoing,
            variable_types,
            fwd_ast,
            rev_ast,
            dict(spec.get("conditionVariables", {})),
        )

    layout = {k: tuple(v) for k, v in doc.get("layout", {}).items()}
    net = NetDef(
        name=name,
        mode=mode,
        token_types=token_types,
        places=places,
        transitions=transitions,
        initial_tokens={p: frozenset(s) for p, s in initial_tokens.items()},
        initial_bonds={p: frozenset(s) for p, s in initial_bonds.items()},
        data_values=data_values,
        default_semantics=_canon_semantics(doc.get("defaultSemantics", "causal")),
        layout=layout,
    )
    issues = validate_net(net)
    if issues:
        raise NetFileError(
            f"net {name} is not well-formed:\n  " + "\n  ".join(issues)
        )
    return net


def net_to_dict(net: NetDef) -> dict:
    from .conditions import print_condition, Negation

    doc = {
        "name": net.name,
        "mode": net.mode,
        "defaultSemantics": net.default_semantics,
        "tokenTypes": [
            {"name": tt.name, **({"dataType": tt.data_type} if tt.data_type else {})}
            for tt in (net.token_types[n] for n in sorted(net.token_types))
        ],
        "places": list(net.places),
        "instances": [],
        "initialBonds": [],
        "transitions": [],
    }
    if net.mode == GROUND:
        doc["tokenTypes"] = []
    for place in net.places:
        for tok in sorted(net.initial_tokens.get(place, ()), key=lambda t: t.base):
            ident = tok.typ if net.mode == GROUND else tok.base_id
            spec = {"id": ident, "type": tok.typ, "index": tok.index, "place": place}
            if tok.base in net.data_values:
                spec["value"] = net.data_values[tok.base]
            doc["instances"].append(spec)
        for bond in sorted(net.initial_bonds.get(place, ()), key=repr):
            a = bond.a.typ if net.mode == GROUND else bond.a.base_id
            b = bond.b.typ if net.mode == GROUND else bond.b.base_id
            doc["initialBonds"].append({"a": a, "b": b, "place": place})

    def arc(label: ArcLabel) -> dict:
        key = "tokens" if net.mode == GROUND else "vars"
        out = {key: list(label.variables)}
        if label.bonds:
            out["bonds"] = [list(p) for p in label.bonds]
        if label.negative_tokens:
            out["absent"] = list(label.negative_tokens)
        if label.negative_bonds:
            out["absentBonds"] = [list(p) for p in label.negative_bonds]
        return out

    for name in sorted(net.transitions):
        t = net.transitions[name]
        spec = {
            "name": name,
            "in": {p: arc(l) for p, l in sorted(t.incoming.items())},
            "out": {p: arc(l) for p, l in sorted(t.outgoing.items())},
        }
        if net.mode == VARIABLE and t.variable_types:
            spec["variables"] = dict(sorted(t.variable_types.items()))
        if t.condition_variables:
            spec["conditionVariables"] = dict(sorted(t.condition_variables.items()))
        if t.forward_condition is not None:
            spec["forwardCondition"] = print_condition(t.forward_condition)
        if t.reverse_condition is not None:
            if isinstance(t.reverse_condition, Negation) and (
                t.reverse_condition.inner == t.forward_condition
            ):
                spec["reverseCondition"] = "!forward"
            else:
                spec["reverseCondition"] = print_condition(t.reverse_condition)
        doc["transitions"].append(spec)
    if net.layout:
        doc["layout"] = {k: list(v) for k, v in net.layout.items()}
    return doc


def load_net(path) -> NetDef:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise NetFileError(f"{path}: {exc}") from None
    return net_from_dict(doc)


def save_net(net: NetDef, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(net_to_dict(net), fh, indent=2, sort_keys=False)
        fh.write("\n")


def instance_by_id(net: NetDef, ident: str) -> TokenInstance:
    """Resolve an instance id ('a' in ground mode, 'a_1' otherwise)."""
    for place in net.places:
        for tok in net.initial_tokens.get(place, ()):
            if ident in (tok.base_id, tok.typ if net.mode == GROUND else None):
                return tok
    raise NetFileError(f"unknown token instance {ident}")


def display_id(net: NetDef, tok: TokenInstance) -> str:
    return tok.typ if net.mode == GROUND else tok.base_id
