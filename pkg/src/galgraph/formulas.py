"""First-order formulas over the graph language {R, =}.

Concrete syntax is an s-expression: ``(R x y)``, ``(= x y)``, ``(not F)``,
``(and F G)``, ``(or F G)``, ``(implies F G)``, ``(exists x F)``,
``(forall x F)``.  A term is a variable name or ``(const c)``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Union

from .graphs import Graph


class FormulaError(ValueError):
    pass


# -- AST --------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self) -> str:
        return f"(const {self.name})"


Term = Union[str, Const]


@dataclass(frozen=True)
class Rel:
    x: Term
    y: Term


@dataclass(frozen=True)
class Eq:
    x: Term
    y: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


Formula = Union[Rel, Eq, Not, And, Or, Implies, Exists, Forall]


# -- s-expressions ----------------------------------------------------------

def tokenize(text: str) -> list[tuple[str, int]]:
    out, i = [], 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            out.append((c, i))
            i += 1
        elif c == ";":
            while i < len(text) and text[i] != "\n":
                i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "()":
                j += 1
            out.append((text[i:j], i))
            i = j
    return out


def read_sexpr(text: str):
    """Nested lists of (token, position) leaves; exactly one top-level form."""
    toks = tokenize(text)
    pos = 0

    def read():
        nonlocal pos
        if pos >= len(toks):
            raise FormulaError(f"unexpected end of input at position {len(text)}")
        tok, at = toks[pos]
        pos += 1
        if tok == "(":
            items = []
            while True:
                if pos >= len(toks):
                    raise FormulaError(f"unclosed '(' opened at position {at}")
                if toks[pos][0] == ")":
                    pos += 1
                    return (items, at)
                items.append(read())
        if tok == ")":
            raise FormulaError(f"unexpected ')' at position {at}")
        return (tok, at)

    form = read()
    if pos != len(toks):
        raise FormulaError(f"trailing input at position {toks[pos][1]}")
    return form


def _atom(node) -> tuple[str, int]:
    val, at = node
    if isinstance(val, list):
        raise FormulaError(f"expected a symbol at position {at}")
    return val, at


def _term(node) -> Term:
    val, at = node
    if isinstance(val, list):
        if len(val) == 2 and _atom(val[0])[0] == "const":
            return Const(_atom(val[1])[0])
        raise FormulaError(f"bad term at position {at}")
    return val


def _build(node) -> Formula:
    val, at = node
    if not isinstance(val, list) or not val:
        raise FormulaError(f"expected a formula at position {at}")
    head, _ = _atom(val[0])
    args = val[1:]

    def arity(n):
        if len(args) != n:
            raise FormulaError(f"'{head}' takes {n} arguments (position {at})")

    if head == "R":
        arity(2)
        return Rel(_term(args[0]), _term(args[1]))
    if head == "=":
        arity(2)
        return Eq(_term(args[0]), _term(args[1]))
    if head == "not":
        arity(1)
        return Not(_build(args[0]))
    if head in ("and", "or", "implies"):
        arity(2)
        cls = {"and": And, "or": Or, "implies": Implies}[head]
        return cls(_build(args[0]), _build(args[1]))
    if head in ("exists", "forall"):
        arity(2)
        var, _ = _atom(args[0])
        cls = Exists if head == "exists" else Forall
        return cls(var, _build(args[1]))
    raise FormulaError(f"unknown connective '{head}' at position {at}")


def parse_graph_formula(text: str, free: Iterable[str] | None = None) -> Formula:
    """Parse; with ``free`` given, any other free variable is an error."""
    f = _build(read_sexpr(text))
    if free is not None:
        extra = free_vars(f) - set(free)
        if extra:
            raise FormulaError(f"unbound variable(s): {', '.join(sorted(extra))}")
    return f


def parse_sentence(text: str) -> Formula:
    return parse_graph_formula(text, free=())


def _t(x: Term) -> str:
    return str(x)


def to_sexpr(f: Formula) -> str:
    if isinstance(f, Rel):
        return f"(R {_t(f.x)} {_t(f.y)})"
    if isinstance(f, Eq):
        return f"(= {_t(f.x)} {_t(f.y)})"
    if isinstance(f, Not):
        return f"(not {to_sexpr(f.body)})"
    if isinstance(f, (And, Or, Implies)):
        op = {And: "and", Or: "or", Implies: "implies"}[type(f)]
        return f"({op} {to_sexpr(f.left)} {to_sexpr(f.right)})"
    if isinstance(f, (Exists, Forall)):
        op = "exists" if isinstance(f, Exists) else "forall"
        return f"({op} {f.var} {to_sexpr(f.body)})"
    raise TypeError(f)


# -- syntactic helpers ------------------------------------------------------

def free_vars(f: Formula) -> set[str]:
    if isinstance(f, (Rel, Eq)):
        return {t for t in (f.x, f.y) if isinstance(t, str)}
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or, Implies)):
        return free_vars(f.left) | free_vars(f.right)
    return free_vars(f.body) - {f.var}


def all_vars(f: Formula) -> set[str]:
    if isinstance(f, (Rel, Eq)):
        return {t for t in (f.x, f.y) if isinstance(t, str)}
    if isinstance(f, Not):
        return all_vars(f.body)
    if isinstance(f, (And, Or, Implies)):
        return all_vars(f.left) | all_vars(f.right)
    return all_vars(f.body) | {f.var}


def constants(f: Formula) -> list[str]:
    """Constant names in order of first occurrence."""
    seen: dict[str, None] = {}

    def walk(g):
        if isinstance(g, (Rel, Eq)):
            for t in (g.x, g.y):
                if isinstance(t, Const):
                    seen.setdefault(t.name)
        elif isinstance(g, Not):
            walk(g.body)
        elif isinstance(g, (And, Or, Implies)):
            walk(g.left)
            walk(g.right)
        else:
            walk(g.body)

    walk(f)
    return list(seen)


def quantifier_depth(f: Formula) -> int:
    if isinstance(f, (Rel, Eq)):
        return 0
    if isinstance(f, Not):
        return quantifier_depth(f.body)
    if isinstance(f, (And, Or, Implies)):
        return max(quantifier_depth(f.left), quantifier_depth(f.right))
    return 1 + quantifier_depth(f.body)


def size(f: Formula) -> int:
    if isinstance(f, (Rel, Eq)):
        return 1
    if isinstance(f, Not):
        return 1 + size(f.body)
    if isinstance(f, (And, Or, Implies)):
        return 1 + size(f.left) + size(f.right)
    return 1 + size(f.body)


def desugar(f: Formula) -> Formula:
    """Rewrite ∨, →, ∀ in terms of ¬, ∧, ∃."""
    if isinstance(f, (Rel, Eq)):
        return f
    if isinstance(f, Not):
        return Not(desugar(f.body))
    if isinstance(f, And):
        return And(desugar(f.left), desugar(f.right))
    if isinstance(f, Or):
        return Not(And(Not(desugar(f.left)), Not(desugar(f.right))))
    if isinstance(f, Implies):
        return Not(And(desugar(f.left), Not(desugar(f.right))))
    if isinstance(f, Exists):
        return Exists(f.var, desugar(f.body))
    return Not(Exists(f.var, Not(desugar(f.body))))


def is_desugared(f: Formula) -> bool:
    if isinstance(f, (Rel, Eq)):
        return True
    if isinstance(f, (Or, Implies, Forall)):
        return False
    if isinstance(f, Not):
        return is_desugared(f.body)
    if isinstance(f, And):
        return is_desugared(f.left) and is_desugared(f.right)
    return is_desugared(f.body)


def substitute_constants(f: Formula, mapping: dict[str, str]) -> Formula:
    """Replace (const c) by the variable mapping[c]."""
    def term(t):
        return mapping.get(t.name, t) if isinstance(t, Const) else t

    if isinstance(f, Rel):
        return Rel(term(f.x), term(f.y))
    if isinstance(f, Eq):
        return Eq(term(f.x), term(f.y))
    if isinstance(f, Not):
        return Not(substitute_constants(f.body, mapping))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(substitute_constants(f.left, mapping), substitute_constants(f.right, mapping))
    return type(f)(f.var, substitute_constants(f.body, mapping))


def eliminate_parameters(f: Formula) -> Formula:
    """∀x1..∀xk φ_b, where φ_b replaces each constant by a fresh variable."""
    names = sorted(constants(f))
    used = all_vars(f)
    mapping = {}
    for i, c in enumerate(names, 1):
        v = f"x{i}"
        while v in used:
            v += "_"
        used.add(v)
        mapping[c] = v
    body = substitute_constants(f, mapping)
    for c in reversed(names):
        body = Forall(mapping[c], body)
    return body


def substitute_vars_with_consts(f: Formula, mapping: dict[str, Const]) -> Formula:
    """Replace free occurrences of variables by constants."""

    def t(x: Term, bound: frozenset) -> Term:
        return mapping[x] if isinstance(x, str) and x in mapping and x not in bound else x

    def go(g: Formula, bound: frozenset) -> Formula:
        if isinstance(g, Rel):
            return Rel(t(g.x, bound), t(g.y, bound))
        if isinstance(g, Eq):
            return Eq(t(g.x, bound), t(g.y, bound))
        if isinstance(g, Not):
            return Not(go(g.body, bound))
        if isinstance(g, (And, Or, Implies)):
            return type(g)(go(g.left, bound), go(g.right, bound))
        return type(g)(g.var, go(g.body, bound | {g.var}))

    return go(f, frozenset())


# -- semantics ----------------------------------------------------------------

def eval_graph(g: Graph, f: Formula, assignment: dict[str, str] | None = None,
               consts: dict[str, str] | None = None) -> bool:
    env = dict(assignment or {})
    consts = consts or {}

    def val(t: Term) -> str:
        if isinstance(t, Const):
            if t.name not in consts:
                raise FormulaError(f"constant {t.name} is not interpreted")
            return consts[t.name]
        if t not in env:
            raise FormulaError(f"unassigned free variable {t}")
        return env[t]

    def ev(h: Formula) -> bool:
        if isinstance(h, Rel):
            return g.adjacent(val(h.x), val(h.y))
        if isinstance(h, Eq):
            return val(h.x) == val(h.y)
        if isinstance(h, Not):
            return not ev(h.body)
        if isinstance(h, And):
            return ev(h.left) and ev(h.right)
        if isinstance(h, Or):
            return ev(h.left) or ev(h.right)
        if isinstance(h, Implies):
            return (not ev(h.left)) or ev(h.right)
        saved = env.get(h.var, None)
        had = h.var in env
        result = isinstance(h, Forall)
        for v in g.vertices:
            env[h.var] = v
            if ev(h.body) != result:
                result = not result
                break
        if had:
            env[h.var] = saved
        else:
            env.pop(h.var, None)
        return result

    return ev(f)


def constant_expansions_hold(g: Graph, f: Formula) -> bool:
    """g ⊨ f under every interpretation of f's constants by vertices."""
    names = sorted(constants(f))
    for combo in itertools.product(g.vertices, repeat=len(names)):
        if not eval_graph(g, f, consts=dict(zip(names, combo))):
            return False
    return True


# -- random corpora -------------------------------------------------------------

def random_formula(rng: random.Random, depth: int, bound: tuple[str, ...] = (),
                   names: tuple[str, ...] = ("x", "y", "z"), size_budget: int = 4) -> Formula:
    """A random formula with quantifier depth at most ``depth`` over ``bound`` variables."""
    connectives = ["not", "and", "or", "implies"] if size_budget > 0 else []
    if not bound:
        if depth == 0:
            raise FormulaError("no variables available for an atom")
        choices = ["exists", "forall"] * 2 + connectives
    else:
        choices = ["atom"] * 3 + connectives + (["exists", "forall"] * 2 if depth > 0 else [])
    kind = rng.choice(choices)
    if kind == "atom":
        a, b = rng.choice(bound), rng.choice(bound)
        return Rel(a, b) if rng.random() < 0.6 else Eq(a, b)
    if kind == "not":
        return Not(random_formula(rng, depth, bound, names, size_budget - 1))
    if kind in ("and", "or", "implies"):
        cls = {"and": And, "or": Or, "implies": Implies}[kind]
        half = (size_budget - 1) // 2
        return cls(random_formula(rng, depth, bound, names, half),
                   random_formula(rng, depth, bound, names, half))
    fresh = [n for n in names if n not in bound]
    v = rng.choice(fresh) if fresh else rng.choice(names)
    cls = Exists if kind == "exists" else Forall
    return cls(v, random_formula(rng, depth - 1, tuple(dict.fromkeys(bound + (v,))),
                                 names, size_budget))


def random_sentence(rng: random.Random, depth: int = 2, size_budget: int = 4) -> Formula:
    while True:
        f = random_formula(rng, depth, (), size_budget=size_budget)
        if not free_vars(f) and quantifier_depth(f) >= 1:
            return f


def all_assignments(vars_: Iterable[str], domain) -> Iterable[dict]:
    vars_ = sorted(vars_)
    for combo in itertools.product(list(domain), repeat=len(vars_)):
        yield dict(zip(vars_, combo))
