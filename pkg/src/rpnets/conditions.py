"""Condition expressions guarding transition execution and reversal.

The boolean core is negation, disjunction and strict numeric ``>``; the
comparison sugar ``< <= >= == !=`` and conjunction ``&`` are desugared into
that core at parse time.  Expressions are floating-point arithmetic over
literals, variables bound to token instances, ``if .. then .. else ..``
conditionals, and place references ``A1.x`` that yield the data value of the
named instance when it rests in the named place and a configurable absent
value (default 0) otherwise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Optional

from .core import NetError, TokenInstance


class ConditionSyntaxError(NetError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ConditionEvalError(NetError):
    pass


# -- AST -----------------------------------------------------------------


@dataclass(frozen=True)
class Literal:
    value: float


@dataclass(frozen=True)
class VariableRef:
    name: str


@dataclass(frozen=True)
class PlaceRef:
    instance: str
    place: str


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * /
    left: object
    right: object


@dataclass(frozen=True)
class Conditional:
    test: object
    then: object
    orelse: object


@dataclass(frozen=True)
class Comparison:
    left: object  # strictly greater-than
    right: object


@dataclass(frozen=True)
class Negation:
    inner: object


@dataclass(frozen=True)
class Disjunction:
    left: object
    right: object


BOOL_NODES = (Comparison, Negation, Disjunction)


# -- lexer ----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>>=|<=|==|!=|[-+*/><!|&().]))"
)

_UNICODE = {"∨": "|", "∧": "&", "¬": "!", "≥": ">=", "≤": "<=", "≠": "!=", "×": "*", "÷": "/"}

_KEYWORDS = {"if", "then", "else", "and", "or", "not"}


def _lex(text: str):
    for uni, ascii_ in _UNICODE.items():
        text = text.replace(uni, ascii_)
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:].lstrip()
            if not rest:
                break
            raise ConditionSyntaxError(f"unexpected character {rest[0]!r}", pos)
        if m.lastgroup == "number":
            tokens.append(("number", m.group("number"), m.start("number")))
        elif m.lastgroup == "ident":
            word = m.group("ident")
            kind = word if word in _KEYWORDS else "ident"
            tokens.append((kind, word, m.start("ident")))
        else:
            op = m.group("op")
            tokens.append((op, op, m.start("op")))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _lex(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        kind_, value, pos = self.next()
        if kind_ != kind:
            raise ConditionSyntaxError(f"expected {kind!r}, found {value!r}", pos)
        return value

    def error(self, message):
        _, value, pos = self.peek()
        raise ConditionSyntaxError(f"{message}, found {value!r}", pos)

    # conditions: disjunction of conjunctions of (negated) atoms

    def condition(self):
        node = self.conjunction()
        while self.peek()[0] in ("|", "or"):
            self.next()
            node = Disjunction(node, self.conjunction())
        return node

    def conjunction(self):
        node = self.negation()
        while self.peek()[0] in ("&", "and"):
            self.next()
            right = self.negation()
            node = Negation(Disjunction(Negation(node), Negation(right)))
        return node

    def negation(self):
        if self.peek()[0] in ("!", "not"):
            self.next()
            return Negation(self.negation())
        return self.condition_atom()

    def condition_atom(self):
        if self.peek()[0] == "(":
            mark = self.i
            self.next()
            try:
                inner = self.condition()
                self.expect(")")
                return inner
            except ConditionSyntaxError:
                self.i = mark  # a parenthesised arithmetic expression instead
        return self.comparison()

    def comparison(self):
        left = self.expression()
        kind, _, _ = self.peek()
        if kind == ">":
            self.next()
            return Comparison(left, self.expression())
        if kind == "<":
            self.next()
            return Comparison(self.expression(), left)
        if kind == ">=":
            self.next()
            return Negation(Comparison(self.expression(), left))
        if kind == "<=":
            self.next()
            return Negation(Comparison(left, self.expression()))
        if kind == "==":
            self.next()
            right = self.expression()
            return Negation(Disjunction(Comparison(left, right), Comparison(right, left)))
        if kind == "!=":
            self.next()
            right = self.expression()
            return Disjunction(Comparison(left, right), Comparison(right, left))
        self.error("expected a comparison operator")

    # arithmetic expressions

    def expression(self):
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            node = Binary(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] in ("*", "/"):
            op = self.next()[0]
            node = Binary(op, node, self.factor())
        return node

    def factor(self):
        kind, value, pos = self.peek()
        if kind == "number":
            self.next()
            return Literal(float(value))
        if kind == "(":
            self.next()
            node = self.expression()
            self.expect(")")
            return node
        if kind == "if":
            self.next()
            test = self.condition()
            self.expect("then")
            then = self.expression()
            self.expect("else")
            orelse = self.expression()
            return Conditional(test, then, orelse)
        if kind == "ident":
            self.next()
            if self.peek()[0] == ".":
                self.next()
                place = self.expect("ident")
                return PlaceRef(value, place)
            return VariableRef(value)
        raise ConditionSyntaxError(f"expected an expression, found {value!r}", pos)


def parse_condition(text: str):
    p = _Parser(text)
    node = p.condition()
    kind, value, pos = p.peek()
    if kind != "eof":
        raise ConditionSyntaxError(f"trailing input {value!r}", pos)
    return node


def parse_expression(text: str):
    p = _Parser(text)
    node = p.expression()
    kind, value, pos = p.peek()
    if kind != "eof":
        raise ConditionSyntaxError(f"trailing input {value!r}", pos)
    return node


# -- printing ---------------------------------------------------------------


def _expr_prec(node) -> int:
    if isinstance(node, Conditional):
        return 0
    if isinstance(node, Binary):
        return 2 if node.op in "*/" else 1
    return 3  # literals, variables, place references


def _print_expr(node, min_prec=0) -> str:
    if isinstance(node, Literal):
        v = node.value
        return str(int(v)) if v == int(v) else repr(v)
    if isinstance(node, VariableRef):
        text = node.name
    elif isinstance(node, PlaceRef):
        text = f"{node.instance}.{node.place}"
    elif isinstance(node, Conditional):
        text = (
            f"if {print_condition(node.test)} then {_print_expr(node.then, 1)} "
            f"else {_print_expr(node.orelse, 1)}"
        )
    elif isinstance(node, Binary):
        prec = _expr_prec(node)
        left = _print_expr(node.left, prec)
        right = _print_expr(node.right, prec + 1)  # left-associative
        text = f"{left} {node.op} {right}"
    else:
        raise NetError(f"not an expression node: {node!r}")
    if _expr_prec(node) < min_prec:
        return f"({text})"
    return text


def print_condition(node) -> str:
    if isinstance(node, Disjunction):
        right = print_condition(node.right)
        if isinstance(node.right, Disjunction):
            right = f"({right})"  # the parser associates to the left
        return f"{print_condition(node.left)} | {right}"
    if isinstance(node, Negation):
        inner = print_condition(node.inner)
        if isinstance(node.inner, Disjunction):
            return f"!({inner})"
        if isinstance(node.inner, Negation):
            return f"!{inner}"
        return f"!({inner})"
    if isinstance(node, Comparison):
        return f"{_print_expr(node.left, 1)} > {_print_expr(node.right, 1)}"
    raise NetError(f"not a condition node: {node!r}")


def free_variables(node) -> frozenset:
    out = set()

    def walk(n):
        if isinstance(n, VariableRef):
            out.add(n.name)
        elif isinstance(n, (Negation,)):
            walk(n.inner)
        elif isinstance(n, (Disjunction, Comparison)):
            walk(n.left)
            walk(n.right)
        elif isinstance(n, Binary):
            walk(n.left)
            walk(n.right)
        elif isinstance(n, Conditional):
            walk(n.test)
            walk(n.then)
            walk(n.orelse)

    walk(node)
    return frozenset(out)


# -- evaluation ---------------------------------------------------------------


def _resolve_instance(marking, ident: str):
    """Find the token carrying instance id ``ident`` ('a_1', or the bare type
    name for singleton ground tokens); returns (place, token) or None."""
    fallback = None
    for place, content in marking.items():
        for tok in content.tokens:
            if tok.base_id == ident:
                return place, tok
            if tok.typ == ident and tok.index == 1:
                fallback = (place, tok)
    return fallback


def eval_expr(node, V: Mapping, M: Mapping, I: Mapping, absent_value: float = 0.0) -> float:
    """Evaluate an arithmetic expression against variable bindings ``V``
    (variable -> token instance), marking ``M`` and data assignment ``I``
    (token base -> value)."""
    if isinstance(node, Literal):
        return node.value
    if isinstance(node, VariableRef):
        if node.name not in V:
            raise ConditionEvalError(f"unbound condition variable {node.name}")
        tok = V[node.name]
        base = tok.base if isinstance(tok, TokenInstance) else tok
        if base not in I:
            raise ConditionEvalError(f"token {base} carries no data value")
        return I[base]
    if isinstance(node, PlaceRef):
        found = _resolve_instance(M, node.instance)
        if found is None:
            return absent_value
        place, tok = found
        if place != node.place:
            return absent_value
        if tok.base not in I:
            raise ConditionEvalError(f"token {tok.base_id} carries no data value")
        return I[tok.base]
    if isinstance(node, Binary):
        left = eval_expr(node.left, V, M, I, absent_value)
        right = eval_expr(node.right, V, M, I, absent_value)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if right == 0.0:
            raise ConditionEvalError("undefined expression: division by zero")
        return left / right
    if isinstance(node, Conditional):
        if eval_condition(node.test, V, M, I, absent_value):
            return eval_expr(node.then, V, M, I, absent_value)
        return eval_expr(node.orelse, V, M, I, absent_value)
    raise NetError(f"not an expression node: {node!r}")


def eval_condition(node, V: Mapping, M: Mapping, I: Mapping, absent_value: float = 0.0) -> bool:
    if isinstance(node, Negation):
        return not eval_condition(node.inner, V, M, I, absent_value)
    if isinstance(node, Disjunction):
        return eval_condition(node.left, V, M, I, absent_value) or eval_condition(
            node.right, V, M, I, absent_value
        )
    if isinstance(node, Comparison):
        return eval_expr(node.left, V, M, I, absent_value) > eval_expr(
            node.right, V, M, I, absent_value
        )
    raise NetError(f"not a condition node: {node!r}")


# -- controlled enabledness ----------------------------------------------------


@dataclass(frozen=True)
class VariableAssignment:
    """Bindings for the free condition variables (agreeing with the arc
    assignment on shared variables)."""

    bindings: tuple

    @staticmethod
    def make(mapping: Mapping[str, TokenInstance]):
        return VariableAssignment(tuple(sorted(mapping.items())))

    def as_dict(self) -> dict:
        return dict(self.bindings)

    def __repr__(self):
        inner = ", ".join(f"{v}={tok!r}" for v, tok in self.bindings)
        return f"V[{inner}]"


EXTENSION_CAP = 512  # enumeration cap for free condition variables


def _data_type_of(net, t, var: str) -> Optional[str]:
    typ = net.type_of_variable(t, var)
    return net.token_types[typ].data_type


def condition_extensions(net, state, t, condition, arc_binding: Mapping) -> list:
    """All (capped, deterministically ordered) injective extensions of the
    arc binding to the free variables of ``condition``."""
    free = sorted(free_variables(condition))
    fixed = {u: arc_binding[u] for u in free if u in arc_binding}
    open_vars = [u for u in free if u not in arc_binding]
    if not open_vars:
        return [fixed]
    all_tokens = [tok for _, tok in state.tokens()]
    results = []

    def extend(i, acc):
        if len(results) >= EXTENSION_CAP:
            return
        if i == len(open_vars):
            results.append(dict(acc))
            return
        var = open_vars[i]
        tag = _data_type_of(net, t, var)
        used = set(acc.values())
        for tok in all_tokens:
            if tok in used:
                continue
            if net.token_types[tok.typ].data_type != tag:
                continue
            acc[var] = tok
            extend(i + 1, acc)
            del acc[var]

    extend(0, dict(fixed))
    return results


def condition_holds(net, state, t, condition, arc_binding: Mapping):
    """First satisfying variable assignment for ``condition``, or None."""
    if condition is None:
        return VariableAssignment.make({})
    for ext in condition_extensions(net, state, t, condition, arc_binding):
        if eval_condition(condition, ext, state.marking, net.data_values):
            return VariableAssignment.make(ext)
    return None


def enabled_controlled(net, state, name: str, direction: str, semantics: str) -> list:
    """Pairs (enabling assignment, condition variable assignment) for which
    the underlying semantics enables the move and the relevant condition
    evaluates to true under some extension; an absent condition admits every
    underlying assignment."""
    from . import collective as coll
    from . import individual as ind

    t = net.transitions[name]
    out = []
    if direction == "forward":
        for asg in ind.enabled_forward(net, state, name):
            v = condition_holds(net, state, t, t.forward_condition, asg.as_dict())
            if v is not None:
                out.append((asg, v))
        return out
    if semantics == ind.COLLECTIVE:
        moves = [
            (occ, asg)
            for occ, asg in coll.coll_enabled_reverse_all(net, state)
            if occ.transition == name
        ]
    else:
        moves = [
            (occ, asg)
            for occ, asg in ind.enabled_reverse(net, state, semantics)
            if occ.transition == name
        ]
    for occ, asg in moves:
        v = condition_holds(net, state, t, t.reverse_condition, asg.as_dict())
        if v is not None:
            out.append((asg, v))
    return out
