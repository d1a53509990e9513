"""Shared test machinery: programmatic nets, a random net generator, and
random walks through the reversal semantics."""

from __future__ import annotations

import random

from rpnets import net_from_dict
from rpnets.core import GROUND, NetDef, NetError, VARIABLE
from rpnets.individual import (
    OUT_OF_CAUSAL,
    enabled_forward,
    enabled_reverse,
    fire_forward,
    fire_reverse,
)
from rpnets.state import State


def build_net(doc: dict) -> NetDef:
    return net_from_dict(doc)


def simple_chain(n_steps: int = 1, mode: str = VARIABLE) -> NetDef:
    """p0 -t1-> p1 -t2-> ... with a single token."""
    places = [f"p{i}" for i in range(n_steps + 1)]
    doc = {
        "name": f"chain{n_steps}",
        "mode": mode,
        "tokenTypes": [{"name": "a"}],
        "places": places,
        "instances": [
            {"type": "a", "index": 1, "place": "p0"}
            if mode == VARIABLE
            else {"type": "a", "place": "p0"}
        ],
        "transitions": [],
    }
    for i in range(n_steps):
        arc = {"vars": ["u"]} if mode == VARIABLE else {"tokens": ["a"]}
        spec = {"name": f"t{i + 1}", "in": {places[i]: arc}, "out": {places[i + 1]: arc}}
        if mode == VARIABLE:
            spec["variables"] = {"u": "a"}
        doc["transitions"].append(spec)
    return build_net(doc)


# -- random nets ----------------------------------------------------------------


def random_net(
    rng: random.Random,
    mode: str = VARIABLE,
    max_types: int = 3,
    max_instances: int = 3,
    max_places: int = 5,
    max_transitions: int = 4,
    acyclic: bool = False,
    allow_destruction: bool = True,
    allow_initial_bonds: bool = True,
) -> NetDef:
    """A small well-formed net built by construction.

    ``acyclic`` lays the places out in strata with transitions always moving
    strictly forward, so the forward state space is finite.
    """
    n_types = rng.randint(1, max_types)
    types = [chr(ord("a") + i) for i in range(n_types)]
    n_places = rng.randint(2, max_places)
    places = [f"p{i}" for i in range(n_places)]

    instances = []
    placement = {}
    for typ in types:
        count = 1 if mode == GROUND else rng.randint(1, max_instances)
        for idx in range(1, count + 1):
            if acyclic:
                place = places[rng.randrange(max(1, n_places - 1))]
            else:
                place = rng.choice(places)
            instances.append({"type": typ, "index": idx, "place": place})
            placement[(typ, idx)] = place

    initial_bonds = []
    if allow_initial_bonds and len(instances) >= 2 and rng.random() < 0.4:
        by_place = {}
        for spec in instances:
            by_place.setdefault(spec["place"], []).append(spec)
        for place, specs in by_place.items():
            if len(specs) >= 2 and rng.random() < 0.5:
                a, b = rng.sample(specs, 2)
                if (a["type"], a["index"]) != (b["type"], b["index"]):
                    initial_bonds.append(
                        {
                            "a": f"{a['type']}_{a['index']}",
                            "b": f"{b['type']}_{b['index']}",
                            "place": place,
                        }
                    )
                    break

    transitions = []
    for ti in range(rng.randint(1, max_transitions)):
        n_vars = rng.randint(1, 2)
        if mode == GROUND:
            chosen = rng.sample(types, min(n_vars, len(types)))
            var_types = {t: t for t in chosen}
        else:
            var_types = {f"v{i}": rng.choice(types) for i in range(n_vars)}
        vars_ = sorted(var_types)

        if acyclic:
            max_src = n_places - 2
            src_idx = {v: rng.randint(0, max_src) for v in vars_}
            in_places = {v: places[src_idx[v]] for v in vars_}
            out_low = {v: src_idx[v] + 1 for v in vars_}
        else:
            in_places = {v: rng.choice(places) for v in vars_}
            out_low = {v: 0 for v in vars_}

        incoming = {}
        for v in vars_:
            incoming.setdefault(in_places[v], {"vars": []})["vars"].append(v)

        guard_bonds = []
        for place, lab in incoming.items():
            if len(lab["vars"]) >= 2 and rng.random() < 0.35:
                guard_bonds.append(tuple(sorted(rng.sample(lab["vars"], 2))))
                lab["bonds"] = [list(guard_bonds[-1])]

        split = len(vars_) >= 2 and rng.random() < 0.35
        outgoing = {}
        out_place_of = {}
        if split:
            for v in vars_:
                place = places[rng.randint(out_low[v], n_places - 1)]
                out_place_of[v] = place
        else:
            low = max(out_low.values())
            place = places[rng.randint(low, n_places - 1)]
            for v in vars_:
                out_place_of[v] = place
        for v in vars_:
            outgoing.setdefault(out_place_of[v], {"vars": []})["vars"].append(v)

        effect_bonds = []
        for place, lab in outgoing.items():
            here = lab["vars"]
            if len(here) >= 2 and rng.random() < 0.5:
                effect_bonds.append(tuple(sorted(rng.sample(here, 2))))
        carried = []
        for pair in guard_bonds:
            same_place = out_place_of[pair[0]] == out_place_of[pair[1]]
            keep = not allow_destruction or rng.random() < 0.5
            if same_place and keep:
                carried.append(pair)
            elif not same_place and not allow_destruction:
                carried.append(pair)  # forced: re-route both to one place
                out_place_of[pair[1]] = out_place_of[pair[0]]
                outgoing = {}
                for v in vars_:
                    outgoing.setdefault(out_place_of[v], {"vars": []})["vars"].append(v)
        for place, lab in outgoing.items():
            bonds = [
                list(p)
                for p in set(effect_bonds + carried)
                if out_place_of[p[0]] == place and out_place_of[p[1]] == place
            ]
            if bonds:
                lab["bonds"] = sorted(bonds)

        if mode == GROUND:
            for lab in list(incoming.values()) + list(outgoing.values()):
                lab["tokens"] = lab.pop("vars")
                if "bonds" in lab:
                    lab["bonds"] = sorted(lab["bonds"])

        spec = {"name": f"t{ti + 1}", "in": incoming, "out": outgoing}
        if mode == VARIABLE:
            spec["variables"] = var_types
        transitions.append(spec)

    doc = {
        "name": "random",
        "mode": mode,
        "tokenTypes": [{"name": t} for t in types],
        "places": places,
        "instances": (
            [{"type": s["type"], "place": s["place"]} for s in instances]
            if mode == GROUND
            else instances
        ),
        "initialBonds": initial_bonds if mode == VARIABLE else [],
        "transitions": transitions,
    }
    try:
        return build_net(doc)
    except NetError:
        return random_net(
            random.Random(rng.random()),
            mode,
            max_types,
            max_instances,
            max_places,
            max_transitions,
            acyclic,
            allow_destruction,
            allow_initial_bonds,
        )


def random_walk(
    net: NetDef,
    rng: random.Random,
    steps: int,
    semantics: str = OUT_OF_CAUSAL,
    reverse_bias: float = 0.4,
    state: State | None = None,
):
    """Random mixed execution; yields every visited state (including the
    initial one)."""
    state = state or net.initial_state()
    visited = [state]
    for _ in range(steps):
        forward = [
            (name, asg)
            for name in sorted(net.transitions)
            for asg in enabled_forward(net, state, name)
        ]
        backward = enabled_reverse(net, state, semantics)
        use_reverse = backward and (not forward or rng.random() < reverse_bias)
        if use_reverse:
            occ, asg = backward[rng.randrange(len(backward))]
            state = fire_reverse(net, state, occ, asg, semantics)
        elif forward:
            name, asg = forward[rng.randrange(len(forward))]
            state = fire_forward(net, state, name, asg)
        else:
            break
        visited.append(state)
    return visited


def random_reached_states(seed: int, count: int, mode: str = VARIABLE, semantics: str = OUT_OF_CAUSAL):
    """Generate at least ``count`` states by random walks over random nets."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        net = random_net(rng, mode=mode)
        walk = random_walk(net, rng, steps=rng.randint(3, 12), semantics=semantics)
        out.extend((net, s) for s in walk)
    return out[:count]
