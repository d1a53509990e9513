"""Acceptance suite: one test per criterion, each printing a verdict line.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines; each criterion asserts its stated tolerance (zero failures, runtime
caps) directly.
"""

from __future__ import annotations

import glob
import random
import time

import rpnets as r
from rpnets.analysis import (
    BINDING_LABELS,
    ExplorationBounds,
    MarkingPattern,
    PropertyQuery,
    build_lts,
    check_property_on,
    expand_to_ground,
    liveness_level,
    lts_isomorphic_reachable,
    states_causally_equivalent,
    _marking_record_profile,
    _all_chain_labels,
)
from rpnets.collective import (
    coll_enabled_reverse,
    coll_fire_forward,
    coll_fire_reverse,
)
from rpnets.conditions import eval_condition, parse_condition, print_condition
from rpnets.core import GROUND, VARIABLE
from rpnets.individual import BACKTRACK, CAUSAL, OUT_OF_CAUSAL
from rpnets.state import Occurrence
from rpnets.traces import load_trace, run_trace
from helpers import build_net, random_net, random_walk
from oracles import (
    fixpoint_states,
    oracle_deadlock,
    oracle_home,
    oracle_liveness_level,
    oracle_persistent,
    oracle_reachable,
    state_text,
)

NETS = "src/rpnets/nets"
TRACES = "src/rpnets/traces"


def report(criterion: int, description: str, ok: bool, extra: str = ""):
    tag = "PASS" if ok else "FAIL"
    line = f"[{tag}] criterion {criterion}: {description}"
    if extra:
        line += f" ({extra})"
    print(line)
    assert ok, line


def load(name):
    return r.load_net(f"{NETS}/{name}")


# -- criterion 1: golden traces --------------------------------------------------


def test_criterion_1_golden_traces():
    started = time.perf_counter()
    ran = []
    for path in sorted(glob.glob(f"{TRACES}/*.trace.json")):
        script = load_trace(path)
        net = load(script["net"])
        run_trace(net, script)
        ran.append(net.name)
    elapsed = time.perf_counter() - started
    expected = {"catalysis", "erk", "transaction", "autoprotolysis",
                "chloride", "cfcr", "deadlock", "antenna"}
    ok = expected <= set(ran) and elapsed < 5.0
    report(1, "golden traces replay with exact-marking assertions", ok,
           f"{len(ran)} scripts in {elapsed:.2f}s")


# -- criterion 2: loop lemmas -----------------------------------------------------


def _forward_options(net, state):
    return [
        (name, asg)
        for name in sorted(net.transitions)
        for asg in r.enabled_forward(net, state, name)
    ]


def test_criterion_2_loop_lemmas():
    per_semantics = {BACKTRACK: 0, CAUSAL: 0, OUT_OF_CAUSAL: 0, "collective": 0}
    failures = 0
    rng = random.Random(2024)
    while min(per_semantics.values()) < 1000:
        mode = VARIABLE if rng.random() < 0.6 else GROUND
        net = random_net(rng, mode=mode)
        for state in random_walk(net, rng, rng.randint(0, 6)):
            options = _forward_options(net, state)
            if not options:
                continue
            name, asg = options[rng.randrange(len(options))]
            after = r.fire_forward(net, state, name, asg)
            occ = Occurrence(name, max(after.history[name]))
            for semantics in (BACKTRACK, CAUSAL, OUT_OF_CAUSAL):
                pairs = dict(r.enabled_reverse(net, after, semantics))
                if occ not in pairs:
                    failures += 1
                    continue
                restored = r.fire_reverse(net, after, occ, pairs[occ], semantics)
                if restored != state:
                    failures += 1
                per_semantics[semantics] += 1
            if mode == VARIABLE:
                coll_after = coll_fire_forward(net, state, name, asg)
                match = [
                    b for b in coll_enabled_reverse(net, coll_after, occ)
                    if b.base_signature() == asg.base_signature()
                ]
                if not match or coll_fire_reverse(
                    net, coll_after, occ, match[0]
                ) != state:
                    failures += 1
                per_semantics["collective"] += 1
    ok = failures == 0
    counts = ", ".join(f"{k}={v}" for k, v in sorted(per_semantics.items()))
    report(2, "forward-then-reverse restores the exact state", ok,
           f"{counts}, failures={failures}")


# -- criterion 3: enabledness and relation chains ---------------------------------


def test_criterion_3_enabledness_chain():
    rng = random.Random(333)
    states_checked = 0
    failures = 0
    while states_checked < 10000:
        mode = VARIABLE if rng.random() < 0.6 else GROUND
        net = random_net(rng, mode=mode)
        for state in random_walk(net, rng, rng.randint(0, 10)):
            bt = dict(r.enabled_backtrack(net, state))
            c = dict(r.enabled_causal(net, state))
            o = dict(r.enabled_out_of_causal(net, state))
            if not set(bt) <= set(c) or not set(c) <= set(o):
                failures += 1
            for occ, asg in bt.items():
                one = r.fire_backtrack(net, state, occ, asg)
                two = r.fire_causal(net, state, occ, c[occ])
                three = r.fire_out_of_causal(net, state, occ, o[occ])
                if not (one == two == three):
                    failures += 1
            for occ, asg in c.items():
                if occ in bt:
                    continue
                if r.fire_causal(net, state, occ, asg) != r.fire_out_of_causal(
                    net, state, occ, o[occ]
                ):
                    failures += 1
            states_checked += 1
    ok = failures == 0
    report(3, "bt subset of causal subset of oco; reversal results agree", ok,
           f"{states_checked} states, failures={failures}")


# -- criterion 4: reverse diamond --------------------------------------------------


def test_criterion_4_reverse_diamond():
    rng = random.Random(44)
    pairs_checked = 0
    failures = 0
    attempts = 0
    while pairs_checked < 600 and attempts < 4000:
        attempts += 1
        mode = VARIABLE if rng.random() < 0.6 else GROUND
        net = random_net(rng, mode=mode)
        for state in random_walk(net, rng, rng.randint(2, 8)):
            for semantics in (CAUSAL, OUT_OF_CAUSAL):
                enabled = r.enabled_reverse(net, state, semantics)
                for i in range(len(enabled)):
                    for j in range(i + 1, len(enabled)):
                        (o1, a1), (o2, a2) = enabled[i], enabled[j]
                        mid1 = r.fire_reverse(net, state, o1, a1, semantics)
                        re2 = dict(r.enabled_reverse(net, mid1, semantics))
                        mid2 = r.fire_reverse(net, state, o2, a2, semantics)
                        re1 = dict(r.enabled_reverse(net, mid2, semantics))
                        if o2 not in re2 or o1 not in re1:
                            failures += 1
                            continue
                        one = r.fire_reverse(net, mid1, o2, re2[o2], semantics)
                        two = r.fire_reverse(net, mid2, o1, re1[o1], semantics)
                        if one != two:
                            failures += 1
                        pairs_checked += 1
    ok = failures == 0 and pairs_checked >= 500
    report(4, "simultaneously enabled reversals commute to the same state", ok,
           f"{pairs_checked} pairs, failures={failures}")


# -- criterion 5: resting-place law -------------------------------------------------


def test_criterion_5_resting_place():
    rng = random.Random(55)
    states_checked = 0
    failures = 0
    while states_checked < 3000:
        mode = VARIABLE if rng.random() < 0.6 else GROUND
        net = random_net(rng, mode=mode)
        for state in random_walk(net, rng, rng.randint(0, 10),
                                 semantics=OUT_OF_CAUSAL):
            for place in net.places:
                content = state.marking[place]
                for tok in content.tokens:
                    comp = r.connected(tok, content.items())
                    if r.resting_place(net, state, comp) != place:
                        failures += 1
            states_checked += 1
    ok = failures == 0
    report(5, "every token rests at last_P of its component under mixed oco", ok,
           f"{states_checked} states, failures={failures}")


# -- criterion 6: causal consistency at desk scale ----------------------------------


def _all_executions(net, max_len):
    """Every mixed forward/causal execution up to ``max_len`` steps, keyed by
    its label trace; labels are (direction, transition, base bindings)."""
    table = {}

    def step(state, trace):
        table[trace] = state
        if len(trace) == max_len:
            return
        for name in sorted(net.transitions):
            for asg in r.enabled_forward(net, state, name):
                label = ("f", name, asg.base_signature())
                step(r.fire_forward(net, state, name, asg), trace + (label,))
        for occ, asg in r.enabled_causal(net, state):
            label = ("r", occ.transition, asg.base_signature())
            step(r.fire_causal(net, state, occ, asg), trace + (label,))

    step(net.initial_state(), ())
    return table


def _equiv_sig(net, state):
    profile = _marking_record_profile(net, state)
    return (tuple(sorted(profile.items())), _all_chain_labels(net, state))


def _reversed_key(net, state, label):
    """The occurrence key a reverse label would remove at ``state``."""
    for occ, asg in r.enabled_causal(net, state):
        if (occ.transition, asg.base_signature()) == (label[1], label[2]):
            return occ.key
    return None


def _created_key(state):
    return state.next_key()


def _rebound_walk(prefix, wanted, gates, children, sig_of):
    """In-table continuations of ``prefix`` replaying ``wanted`` steps (same
    direction and transition, instances possibly rebound), gated step by step
    to states equivalent to the original execution's (None skips a gate)."""
    results = []

    def walk(cur, j):
        if j == len(wanted):
            results.append(cur)
            return
        want_dir, want_t = wanted[j]
        for label, child in children.get(cur, ()):
            if label[0] != want_dir or label[1] != want_t:
                continue
            if gates[j] is not None and sig_of(child) != gates[j]:
                continue
            walk(child, j + 1)

    walk(prefix, 0)
    return results


def _rewrite_neighbors(net, trace, table, children, sig_of):
    """One-step rewrites of ``trace`` that are themselves valid executions:
    swapping concurrent adjacent actions, cancelling a forward firing with
    its own immediate reversal, and cancelling a reversal followed by an
    equivalent re-firing.  Each rewrite re-executes the affected steps with
    possibly different instances of the same types (the simulation between
    causally equivalent states licenses the rebinding)."""
    out = []
    for i in range(len(trace) - 1):
        a, b = trace[i], trace[i + 1]
        prefix = trace[:i]
        pre_state = table[prefix]
        suffix = trace[i + 2:]
        suffix_wanted = [(lab[0], lab[1]) for lab in suffix]
        suffix_gates = [sig_of(trace[: i + 2 + j + 1]) for j in range(len(suffix))]
        # (i) swap adjacent concurrent actions (gate at the pair's end)
        out.extend(_rebound_walk(
            prefix,
            [(b[0], b[1]), (a[0], a[1])] + suffix_wanted,
            [None, sig_of(trace[: i + 2])] + suffix_gates,
            children, sig_of,
        ))
        cancellable = False
        # (ii) cancel forward;reverse of the same occurrence
        if a[0] == "f" and b[0] == "r" and a[1] == b[1] and a[2] == b[2]:
            mid = table[trace[: i + 1]]
            cancellable = _reversed_key(net, mid, b) == _created_key(pre_state)
        # (iii) cancel reverse;equivalent re-fire
        if a[0] == "r" and b[0] == "f" and a[1] == b[1]:
            cancellable = sig_of(prefix) == sig_of(trace[: i + 2])
        if cancellable:
            out.extend(_rebound_walk(
                prefix, suffix_wanted, suffix_gates, children, sig_of
            ))
    return [n for n in out if n != trace]


def _consistency_corpus():
    nets = [
        load("pairs.rpn.json"),
        build_net({
            "name": "bondchain", "mode": "variable",
            "tokenTypes": [{"name": "a"}, {"name": "b"}],
            "places": ["x", "w", "y", "z"],
            "instances": [
                {"type": "a", "index": 1, "place": "x"},
                {"type": "a", "index": 2, "place": "x"},
                {"type": "b", "index": 1, "place": "w"},
            ],
            "transitions": [
                {"name": "t1", "variables": {"u": "a", "v": "b"},
                 "in": {"x": {"vars": ["u"]}, "w": {"vars": ["v"]}},
                 "out": {"y": {"vars": ["u", "v"], "bonds": [["u", "v"]]}}},
                {"name": "t2", "variables": {"u": "a"},
                 "in": {"y": {"vars": ["u"]}}, "out": {"z": {"vars": ["u"]}}},
            ],
        }),
        build_net({
            "name": "independent", "mode": "variable",
            "tokenTypes": [{"name": "a"}, {"name": "b"}],
            "places": ["x1", "x2", "y1", "y2"],
            "instances": [
                {"type": "a", "index": 1, "place": "x1"},
                {"type": "a", "index": 2, "place": "x1"},
                {"type": "b", "index": 1, "place": "y1"},
            ],
            "transitions": [
                {"name": "t1", "variables": {"u": "a"},
                 "in": {"x1": {"vars": ["u"]}}, "out": {"x2": {"vars": ["u"]}}},
                {"name": "t2", "variables": {"v": "b"},
                 "in": {"y1": {"vars": ["v"]}}, "out": {"y2": {"vars": ["v"]}}},
            ],
        }),
        build_net({
            # four transitions, three tokens of one type, a destroyed bond
            "name": "wide", "mode": "variable",
            "tokenTypes": [{"name": "a"}, {"name": "b"}],
            "places": ["x", "w", "y", "z"],
            "instances": [
                {"type": "a", "index": 1, "place": "x"},
                {"type": "a", "index": 2, "place": "x"},
                {"type": "a", "index": 3, "place": "x"},
                {"type": "b", "index": 1, "place": "w"},
            ],
            "transitions": [
                {"name": "t1", "variables": {"u": "a", "v": "b"},
                 "in": {"x": {"vars": ["u"]}, "w": {"vars": ["v"]}},
                 "out": {"y": {"vars": ["u", "v"], "bonds": [["u", "v"]]}}},
                {"name": "t2", "variables": {"u": "a", "v": "b"},
                 "in": {"y": {"vars": ["u", "v"], "bonds": [["u", "v"]]}},
                 "out": {"z": {"vars": ["u"]}, "w": {"vars": ["v"]}}},
                {"name": "t3", "variables": {"u": "a"},
                 "in": {"x": {"vars": ["u"]}}, "out": {"z": {"vars": ["u"]}}},
                {"name": "t4", "variables": {"u": "a"},
                 "in": {"z": {"vars": ["u"]}}, "out": {"x": {"vars": ["u"]}}},
            ],
        }),
    ]
    return nets


def _occurrence_projection(net, trace, table):
    """The (direction, transition, key) view of an assignment-level trace;
    executions projecting equally are the same trace of the occurrence
    calculus (instance choices are not part of trace identity)."""
    out = []
    for i, label in enumerate(trace):
        state = table[trace[:i]]
        if label[0] == "f":
            out.append(("f", label[1], _created_key(state)))
        else:
            out.append(("r", label[1], _reversed_key(net, state, label)))
    return tuple(out)


def test_criterion_6_causal_consistency():
    started = time.perf_counter()
    sound_checks = equivalent_pairs = 0
    failures = []
    for net, max_len in zip(_consistency_corpus(), (6, 6, 6, 4)):
        table = _all_executions(net, max_len)
        children = {}
        for trace in table:
            if trace:
                children.setdefault(trace[:-1], []).append((trace[-1], trace))
        sig_cache = {}

        def sig_of(trace):
            if trace not in sig_cache:
                sig_cache[trace] = _equiv_sig(net, table[trace])
            return sig_cache[trace]

        parent = {t: t for t in table}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            parent[find(x)] = find(y)

        # executions that follow the same occurrence sequence through
        # pointwise equivalent states are realizations of one trace
        by_shape = {}
        for trace in table:
            shape = tuple(
                (lab[0], lab[1], sig_of(trace[: j + 1]))
                for j, lab in enumerate(trace)
            )
            by_shape.setdefault(shape, []).append(trace)
        for shape, traces in by_shape.items():
            for other in traces[1:]:
                union(traces[0], other)

        # soundness: a one-step rewrite never changes the equivalence class
        for trace in table:
            for neighbor in _rewrite_neighbors(net, trace, table, children, sig_of):
                sound_checks += 1
                if not states_causally_equivalent(
                    net, table[trace], table[neighbor]
                ):
                    failures.append(("sound", net.name, trace, neighbor))
                union(trace, neighbor)

        # completeness: equivalent end states are rewrite-connected
        by_sig = {}
        for trace in table:
            by_sig.setdefault(sig_of(trace), []).append(trace)
        for sig, traces in by_sig.items():
            roots = {find(t) for t in traces}
            equivalent_pairs += len(traces) - 1
            if len(roots) != 1:
                failures.append(("complete", net.name, sig, len(roots)))
    elapsed = time.perf_counter() - started
    ok = not failures and elapsed < 60.0
    report(6, "rewrite-related traces reach causally equivalent states and back",
           ok, f"{sound_checks} rewrites, {equivalent_pairs} equivalent pairs, "
               f"{elapsed:.1f}s" + (f", first failure: {failures[0]}" if failures else ""))


# -- criterion 7: expressiveness theorem ---------------------------------------------


def test_criterion_7_expressiveness():
    started = time.perf_counter()
    rng = random.Random(77)
    checked = 0
    failures = 0
    # the two-by-two example: its expansion has exactly four transitions
    pairs = load("pairs.rpn.json")
    ground_pairs = expand_to_ground(pairs)
    if len(ground_pairs.transitions) != 4:
        failures += 1
    a = build_lts(pairs, pairs.initial_state(),
                  ExplorationBounds(semantics=BACKTRACK, label_mode=BINDING_LABELS))
    b = build_lts(ground_pairs, ground_pairs.initial_state(),
                  ExplorationBounds(semantics=BACKTRACK, label_mode=BINDING_LABELS))
    if lts_isomorphic_reachable(a, b) is None:
        failures += 1
    checked += 1
    while checked < 50:
        net = random_net(rng, mode=VARIABLE, acyclic=True, max_places=4,
                         max_transitions=3, max_instances=3)
        lts = build_lts(
            net, net.initial_state(),
            ExplorationBounds(max_states=900, semantics=BACKTRACK,
                              label_mode=BINDING_LABELS),
        )
        if lts.truncated:
            continue
        ground = expand_to_ground(net)
        glts = build_lts(
            ground, ground.initial_state(),
            ExplorationBounds(max_states=4000, semantics=BACKTRACK,
                              label_mode=BINDING_LABELS),
        )
        if glts.truncated or lts_isomorphic_reachable(lts, glts) is None:
            failures += 1
        checked += 1
    elapsed = time.perf_counter() - started
    ok = failures == 0 and elapsed < 120.0
    report(7, "variable nets and their ground expansions have isomorphic LTSs",
           ok, f"{checked} nets in {elapsed:.1f}s, failures={failures}")


# -- criterion 8: property checker against the brute-force oracle ---------------------


def test_criterion_8_property_oracle():
    failures = []

    def explored(name):
        net = load(name)
        lts = build_lts(net, net.initial_state(),
                        ExplorationBounds(max_states=3000, normalize_keys=True))
        assert not lts.truncated
        return net, lts

    # stated verdicts on the bundled nets
    net, lts = explored("deadlock.rpn.json")
    known, succ = fixpoint_states(net, normalize_keys=True)
    if not check_property_on(net, lts, PropertyQuery(kind="deadlock")).holds:
        failures.append("deadlock net: deadlock should be reachable")
    if check_property_on(net, lts, PropertyQuery(kind="deadlock")).holds != \
            oracle_deadlock(net, known, succ):
        failures.append("deadlock verdict disagrees with oracle")

    net, lts = explored("persistence.rpn.json")
    known, succ = fixpoint_states(net, normalize_keys=True)
    if not check_property_on(net, lts, PropertyQuery(kind="persistence")).holds:
        failures.append("persistence net should be persistent")
    if oracle_persistent(net, known, succ) is not True:
        failures.append("persistence oracle disagrees")

    net, lts = explored("home.rpn.json")
    known, succ = fixpoint_states(net, normalize_keys=True)
    target = MarkingPattern.from_dict({"z": ["a_1-b_1"]})
    from rpnets.analysis import marking_matches

    if not check_property_on(
        net, lts, PropertyQuery(kind="homeState", target_marking=target)
    ).holds:
        failures.append("home net: bonded state should be a home state")
    if not oracle_home(net, known, succ, lambda s: marking_matches(net, s, target)):
        failures.append("home oracle disagrees")

    net, lts = explored("liveness.rpn.json")
    known, succ = fixpoint_states(net, normalize_keys=True)
    ladder = {}
    for t in net.transitions:
        ladder[t] = liveness_level(net, lts, t)
        if ladder[t] != oracle_liveness_level(net, known, succ, t):
            failures.append(f"liveness level of {t} disagrees with oracle")
    if ladder != {"t1": 4, "t2": 4, "t3": 0, "t4": 1}:
        failures.append(f"liveness ladder unexpected: {ladder}")

    net, lts = explored("reachability.rpn.json")
    known, _ = fixpoint_states(net, normalize_keys=True)
    target = MarkingPattern.from_dict({"x": ["a_1"], "z": ["b_1"]})
    verdict = check_property_on(
        net, lts, PropertyQuery(kind="reachability", target_marking=target)
    )
    if verdict.holds != oracle_reachable(
        net, known, lambda s: marking_matches(net, s, target)
    ):
        failures.append("reachability verdict disagrees with oracle")

    net, lts = explored("coverability.rpn.json")
    if not check_property_on(
        net, lts,
        PropertyQuery(kind="coverability",
                      target_marking=MarkingPattern.from_dict({"z": ["a_1"]})),
    ).holds:
        failures.append("coverability net: one token at z should be coverable")

    # random nets: full verdict agreement with the independent enumerator
    rng = random.Random(88)
    done = 0
    while done < 12:
        net = random_net(rng, acyclic=True, max_places=4, max_transitions=3,
                         max_instances=2)
        lts = build_lts(net, net.initial_state(),
                        ExplorationBounds(max_states=500, semantics=BACKTRACK))
        if lts.truncated:
            continue
        known, succ = fixpoint_states(net, BACKTRACK)
        if {state_text(net, s) for s in lts.states} != set(known):
            failures.append("exploration differs from enumerator state set")
        if check_property_on(net, lts, PropertyQuery(kind="deadlock")).holds \
                != oracle_deadlock(net, known, succ):
            failures.append("random deadlock verdict disagrees")
        if check_property_on(net, lts, PropertyQuery(kind="persistence")).holds \
                != oracle_persistent(net, known, succ):
            failures.append("random persistence verdict disagrees")
        for t in net.transitions:
            if liveness_level(net, lts, t) != oracle_liveness_level(
                net, known, succ, t
            ):
                failures.append("random liveness level disagrees")
        done += 1
    ok = not failures
    report(8, "property verdicts match the brute-force enumerator", ok,
           failures[0] if failures else f"{done} random nets + figure nets")


# -- criterion 9: parser and evaluator --------------------------------------------------


def _random_expr(rng, depth):
    if depth == 0 or rng.random() < 0.4:
        kind = rng.randrange(3)
        if kind == 0:
            return str(rng.randint(0, 99))
        if kind == 1:
            return rng.choice(["u", "v", "w"])
        return f"{rng.choice(['A1', 'B2'])}.{rng.choice(['x', 'y'])}"
    if rng.random() < 0.15:
        return (f"(if {_random_condition(rng, depth - 1)} "
                f"then {_random_expr(rng, depth - 1)} "
                f"else {_random_expr(rng, depth - 1)})")
    op = rng.choice(["+", "-", "*"])
    return f"({_random_expr(rng, depth - 1)} {op} {_random_expr(rng, depth - 1)})"


def _random_condition(rng, depth=3):
    if depth == 0 or rng.random() < 0.35:
        cmp_op = rng.choice([">", "<", ">=", "<=", "==", "!="])
        return f"{_random_expr(rng, max(depth - 1, 0))} {cmp_op} {_random_expr(rng, max(depth - 1, 0))}"
    kind = rng.randrange(3)
    if kind == 0:
        return f"!({_random_condition(rng, depth - 1)})"
    if kind == 1:
        return f"({_random_condition(rng, depth - 1)}) & ({_random_condition(rng, depth - 1)})"
    return f"({_random_condition(rng, depth - 1)}) | ({_random_condition(rng, depth - 1)})"


def test_criterion_9_parser_evaluator():
    from rpnets.core import TokenInstance

    rng = random.Random(99)
    failures = 0
    for _ in range(1000):
        text = _random_condition(rng)
        try:
            ast = parse_condition(text)
        except r.ConditionSyntaxError:
            failures += 1
            continue
        if parse_condition(print_condition(ast)) != ast:
            failures += 1

    V = {n: TokenInstance("x", i + 1) for i, n in enumerate(["u", "v", "w"])}
    for _ in range(500):
        I = {("x", i + 1): float(rng.randint(-20, 20)) for i in range(3)}

        def holds(text):
            return eval_condition(parse_condition(text), V, {}, I)

        if holds("u<v") != holds("v>u"):
            failures += 1
        if holds("u>=v") != (not holds("v>u")):
            failures += 1
        if holds("u>v & v>w") != (not (not holds("u>v") or not holds("v>w"))):
            failures += 1

    # the decomposition condition flips exactly at 338 degrees
    net = load("chloride.rpn.json")
    t1 = net.transitions["t1"]
    flips = []
    for theta in (337.0, 337.999, 338.0, 500.0):
        values = dict(net.data_values)
        values[("T", 1)] = theta
        state = net.initial_state()
        holds = eval_condition(t1.forward_condition, {}, state.marking, values)
        flips.append((theta, holds))
    expected = [(337.0, False), (337.999, False), (338.0, True), (500.0, True)]
    if flips != expected:
        failures += 1
    ok = failures == 0
    report(9, "grammar round-trip, desugaring laws, 338-degree flip", ok,
           f"failures={failures}")
