"""Session-based stepping service over a JSON protocol.

Each session holds a net, a current state, and an undo stack.  Clients never
compute semantics: every displayed move comes from ``/enabled`` and firing
happens by index into that (deterministically ordered) list, guarded by a
state version counter so concurrent or replayed requests fail with 409
instead of acting on a stale state.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from typing import Optional

from fastapi import Body, FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware

from .analysis import ExplorationBounds, build_lts
from .conditions import print_condition
from .core import NetDef, NetError
from .netfile import NetFileError, _canon_semantics, net_from_dict, net_to_dict
from .state import State
from .stepping import MIXED, Move, apply_move, forward_moves, reverse_moves


@dataclass
class Session:
    ident: str
    net: NetDef
    state: State
    semantics: str
    version: int = 0
    undo_stack: list = field(default_factory=list)  # (move repr, prior state)
    log: list = field(default_factory=list)  # applied move descriptors
    lock: threading.Lock = field(default_factory=threading.Lock)


def _token_id(net: NetDef, tok) -> str:
    return tok.typ if net.mode == "ground" else tok.base_id


def state_view(net: NetDef, state: State, version: int) -> dict:
    places = {}
    bond_graph = []
    for place in net.places:
        content = state.marking[place]
        tokens = []
        for tok in sorted(content.tokens, key=lambda t: t.base):
            tokens.append({
                "id": _token_id(net, tok),
                "type": tok.typ,
                "memory": [
                    {"key": k, "variable": v} for k, v in tok.memory
                ],
                "value": net.data_values.get(tok.base),
            })
        bonds = []
        for bond in sorted(content.bonds, key=repr):
            pair = sorted((_token_id(net, bond.a), _token_id(net, bond.b)))
            bonds.append(pair)
            bond_graph.append({"a": pair[0], "b": pair[1], "place": place})
        places[place] = {"tokens": tokens, "bonds": bonds}
    history = {
        t: sorted(ks) for t, ks in sorted(state.history.items()) if ks
    }
    return {
        "version": version,
        "places": places,
        "history": history,
        "bondGraph": bond_graph,
    }


def _condition_info(net: NetDef, t, move: Move) -> dict:
    cond = t.forward_condition if move.direction == "forward" else t.reverse_condition
    if cond is None:
        return {"text": None, "holds": True, "bindings": {}}
    bindings = {}
    if move.condition_assignment is not None:
        bindings = {
            var: _token_id(net, tok)
            for var, tok in move.condition_assignment.bindings
        }
    return {"text": print_condition(cond), "holds": True, "bindings": bindings}


def move_view(net: NetDef, move: Move, index: int) -> dict:
    t = net.transitions[move.transition]
    return {
        "index": index,
        "direction": move.direction,
        "transition": move.transition,
        "key": move.key,
        "assignment": {
            var: _token_id(net, tok) for var, tok in move.assignment.bindings
        },
        "condition": _condition_info(net, t, move),
    }


def _marking_snapshot(net: NetDef, state: State) -> dict:
    out = {}
    for place in net.places:
        content = state.marking[place]
        items = sorted(_token_id(net, t) for t in content.tokens)
        items += sorted(
            "-".join(sorted((_token_id(net, b.a), _token_id(net, b.b))))
            for b in content.bonds
        )
        out[place] = items
    return out


def diff_view(net: NetDef, before: State, after: State) -> dict:
    old = _marking_snapshot(net, before)
    new = _marking_snapshot(net, after)
    changed = {}
    for place in net.places:
        if old[place] != new[place]:
            changed[place] = {"before": old[place], "after": new[place]}
    return changed


def create_app(preloaded: Optional[NetDef] = None) -> FastAPI:
    app = FastAPI(title="reversing-net stepper")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict = {}
    counter = itertools.count(1)

    def get_session(ident: str) -> Session:
        try:
            return sessions[ident]
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown session")

    def enabled_list(session: Session, direction: str, semantics: str) -> list:
        out = []
        if direction in ("forward", "both"):
            out.extend(forward_moves(session.net, session.state, semantics))
        if direction in ("reverse", "both"):
            out.extend(reverse_moves(session.net, session.state, semantics))
        return out

    @app.get("/nets")
    def nets():
        if preloaded is None:
            return {"preloaded": None}
        return {"preloaded": net_to_dict(preloaded)}

    @app.post("/session", status_code=201)
    def create_session(body: dict = Body(...)):
        try:
            if "net" in body:
                net = net_from_dict(body["net"])
            elif preloaded is not None:
                net = preloaded
            else:
                raise HTTPException(status_code=422, detail="no net supplied")
            semantics = _canon_semantics(body.get("semantics", net.default_semantics))
        except (NetFileError, NetError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        ident = f"s{next(counter)}"
        session = Session(ident, net, net.initial_state(), semantics)
        sessions[ident] = session
        return {
            "session": ident,
            "net": net_to_dict(net),
            "semantics": semantics,
            "layout": {k: list(v) for k, v in net.layout.items()},
            "state": state_view(net, session.state, session.version),
        }

    @app.get("/session/{ident}/state")
    def get_state(ident: str):
        session = get_session(ident)
        with session.lock:
            return state_view(session.net, session.state, session.version)

    @app.get("/session/{ident}/enabled")
    def get_enabled(
        ident: str,
        direction: str = Query("both"),
        semantics: Optional[str] = Query(None),
    ):
        session = get_session(ident)
        if direction not in ("forward", "reverse", "both"):
            raise HTTPException(status_code=422, detail="bad direction")
        with session.lock:
            sem = _canon_semantics(semantics) if semantics else session.semantics
            avail = enabled_list(session, direction, sem)
            return {
                "version": session.version,
                "semantics": sem,
                "direction": direction,
                "moves": [
                    move_view(session.net, m, i) for i, m in enumerate(avail)
                ],
            }

    @app.post("/session/{ident}/fire")
    def fire(ident: str, body: dict = Body(...)):
        session = get_session(ident)
        with session.lock:
            version = body.get("version")
            if version is not None and version != session.version:
                raise HTTPException(status_code=409, detail="stale move")
            direction = body.get("direction", "both")
            sem = _canon_semantics(body.get("semantics", session.semantics))
            avail = enabled_list(session, direction, sem)
            idx = body.get("moveIndex")
            if not isinstance(idx, int) or idx < 0 or idx >= len(avail):
                raise HTTPException(status_code=422, detail="disabled move")
            move = avail[idx]
            before = session.state
            try:
                session.state = apply_move(session.net, before, move, sem)
            except NetError as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            session.version += 1
            session.undo_stack.append((move_view(session.net, move, idx), before))
            session.log.append(
                {
                    "direction": move.direction,
                    "transition": move.transition,
                    "key": move.key,
                    "semantics": sem,
                    "assignment": {
                        var: _token_id(session.net, tok)
                        for var, tok in move.assignment.bindings
                    },
                }
            )
            return {
                "state": state_view(session.net, session.state, session.version),
                "applied": move_view(session.net, move, idx),
                "diff": diff_view(session.net, before, session.state),
            }

    @app.post("/session/{ident}/undo")
    def undo(ident: str):
        session = get_session(ident)
        with session.lock:
            if not session.undo_stack:
                raise HTTPException(status_code=422, detail="nothing to undo")
            _, prior = session.undo_stack.pop()
            session.log.append({"direction": "undo"})
            session.state = prior
            session.version += 1
            return {"state": state_view(session.net, session.state, session.version)}

    @app.get("/session/{ident}/lts")
    def lts(
        ident: str,
        maxStates: int = Query(200),
        direction: str = Query(MIXED),
        normalizeKeys: bool = Query(True),
    ):
        session = get_session(ident)
        with session.lock:
            built = build_lts(
                session.net,
                session.net.initial_state(),
                ExplorationBounds(
                    max_states=maxStates,
                    semantics=session.semantics,
                    direction=direction,
                    normalize_keys=normalizeKeys,
                ),
            )
            current = session.state.lts_key(session.net, normalizeKeys)
            current_id = None
            for sid, st in enumerate(built.states):
                if st.lts_key(session.net, normalizeKeys) == current:
                    current_id = sid
                    break
            return {
                "states": len(built.states),
                "initial": built.initial,
                "current": current_id,
                "truncated": built.truncated,
                "edges": [
                    {"src": s, "transition": l[0], "key": l[1],
                     "direction": l[2], "dst": t}
                    for s, l, t in built.edges
                ],
            }

    @app.get("/session/{ident}/snapshot")
    def snapshot(ident: str):
        session = get_session(ident)
        with session.lock:
            return {
                "net": net_to_dict(session.net),
                "semantics": session.semantics,
                "log": list(session.log),
            }

    return app


app = create_app()
