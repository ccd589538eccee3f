from __future__ import annotations

import itertools
import random
import re

import pytest
from hypothesis import given, settings, strategies as st

from galgraph.formulas import (
    And,
    Const,
    Eq,
    Exists,
    Forall,
    FormulaError,
    Implies,
    Not,
    Or,
    Rel,
    all_vars,
    constant_expansions_hold,
    constants,
    desugar,
    eliminate_parameters,
    eval_graph,
    free_vars,
    is_desugared,
    parse_graph_formula,
    parse_sentence,
    quantifier_depth,
    random_formula,
    random_sentence,
    size,
    substitute_vars_with_consts,
    to_sexpr,
)
from galgraph.graphs import Graph, all_graphs


def python_truth(g: Graph, f, env=None) -> bool:
    """Oracle: compile the formula to a Python expression and eval it."""
    def term(t):
        return repr(t.name) if isinstance(t, Const) else t

    def comp(h) -> str:
        if isinstance(h, Rel):
            return f"(frozenset(({term(h.x)}, {term(h.y)})) in E)"
        if isinstance(h, Eq):
            return f"({term(h.x)} == {term(h.y)})"
        if isinstance(h, Not):
            return f"(not {comp(h.body)})"
        if isinstance(h, And):
            return f"({comp(h.left)} and {comp(h.right)})"
        if isinstance(h, Or):
            return f"({comp(h.left)} or {comp(h.right)})"
        if isinstance(h, Implies):
            return f"((not {comp(h.left)}) or {comp(h.right)})"
        q = "any" if isinstance(h, Exists) else "all"
        return f"{q}({comp(h.body)} for {h.var} in V)"

    E = {frozenset(e) for e in g.edges}
    scope = {"E": E, "V": list(g.vertices), **(env or {})}
    return eval(comp(f), scope)


SMALL = [g for n in (1, 2, 3) for g in all_graphs(n)]


# -- parsing ------------------------------------------------------------------------

def test_parse_examples():
    f = parse_graph_formula("(forall x (exists y (R x y)))")
    assert f == Forall("x", Exists("y", Rel("x", "y")))
    assert parse_graph_formula("(= x (const c))") == Eq("x", Const("c"))
    assert parse_graph_formula("; comment\n(not (R a b))") == Not(Rel("a", "b"))


@pytest.mark.parametrize("text, where", [
    ("(R x)", "takes 2"),
    ("(R x y", "unclosed"),
    ("(R x y))", "trailing"),
    ("(foo x y)", "unknown connective"),
    (")", "unexpected ')'"),
    ("", "end of input"),
    ("((const c) x y)", "symbol"),
])
def test_parse_errors(text, where):
    with pytest.raises(FormulaError, match=re.escape(where)):
        parse_graph_formula(text)


def test_sentence_rejects_free_variables():
    parse_sentence("(exists x (R x x))")
    with pytest.raises(FormulaError, match="unbound"):
        parse_sentence("(exists x (R x y))")


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 9), st.integers(0, 3), st.integers(0, 6))
def test_print_parse_roundtrip(seed, depth, budget):
    f = random_formula(random.Random(seed), max(depth, 1), size_budget=budget)
    assert parse_graph_formula(to_sexpr(f)) == f


# -- syntax helpers -------------------------------------------------------------------

def test_helpers_on_example():
    f = parse_graph_formula("(and (R x (const c)) (forall y (or (= y x) (R y (const d)))))")
    assert free_vars(f) == {"x"}
    assert all_vars(f) == {"x", "y"}
    assert constants(f) == ["c", "d"]
    assert quantifier_depth(f) == 1
    assert size(f) == 6


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_desugar_preserves_truth(seed):
    rng = random.Random(seed)
    f = random_sentence(rng, depth=3, size_budget=5)
    d = desugar(f)
    assert is_desugared(d)
    assert desugar(d) == d
    for g in SMALL:
        assert eval_graph(g, f) == eval_graph(g, d)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_eval_graph_matches_python_oracle(seed):
    f = random_sentence(random.Random(seed), depth=3, size_budget=6)
    for g in SMALL:
        assert eval_graph(g, f) == python_truth(g, f)


def test_eval_with_free_variables_and_constants():
    g = Graph.build(["a", "b", "c"], [("a", "b")])
    f = parse_graph_formula("(R x (const k))")
    assert eval_graph(g, f, {"x": "a"}, {"k": "b"})
    assert not eval_graph(g, f, {"x": "c"}, {"k": "b"})
    with pytest.raises(FormulaError):
        eval_graph(g, f, {"x": "a"})
    with pytest.raises(FormulaError):
        eval_graph(g, f, consts={"k": "a"})


def test_quantifier_restores_outer_binding():
    g = Graph.build(["a", "b"], [("a", "b")])
    f = parse_graph_formula("(and (exists x (= x x)) (= x y))")
    assert eval_graph(g, f, {"x": "a", "y": "a"})
    assert not eval_graph(g, f, {"x": "a", "y": "b"})


# -- parameters -------------------------------------------------------------------

def test_eliminate_parameters_example():
    f = parse_graph_formula("(exists y (and (R (const c) y) (not (= y (const a)))))")
    e = eliminate_parameters(f)
    assert to_sexpr(e) == "(forall x1 (forall x2 (exists y (and (R x2 y) (not (= y x1))))))"
    assert not constants(e) and not free_vars(e)


def test_eliminate_parameters_avoids_capture():
    f = parse_graph_formula("(exists x1 (R x1 (const c)))")
    e = eliminate_parameters(f)
    assert to_sexpr(e) == "(forall x1_ (exists x1 (R x1 x1_)))"


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_eliminate_parameters_matches_all_expansions(seed):
    rng = random.Random(seed)
    f = random_sentence(rng, depth=2, size_budget=4)
    # turn up to two bound variables' free occurrences into constants
    inner = f
    while isinstance(inner, (Exists, Forall)):
        inner = inner.body
    names = sorted(free_vars(inner))[:2]
    if not names:
        return
    g_formula = substitute_vars_with_consts(inner, {n: Const(n.upper()) for n in names})
    g_formula = _close(g_formula)
    for g in SMALL:
        assert eval_graph(g, eliminate_parameters(g_formula)) == \
            constant_expansions_hold(g, g_formula)


def _close(f):
    for v in sorted(free_vars(f)):
        f = Exists(v, f)
    return f


def test_constant_expansions_examples():
    path = Graph.build(["a", "b", "c"], [("a", "b"), ("b", "c")])
    f = parse_graph_formula("(exists y (R (const c) y))")
    assert constant_expansions_hold(path, f)
    assert not constant_expansions_hold(Graph.build(["a", "b"]), f)
    # no constants: a single empty expansion
    assert constant_expansions_hold(path, parse_sentence("(exists x (= x x))"))


def test_all_graph_evaluations_are_isomorphism_invariant():
    sentences = [random_sentence(random.Random(i), depth=3, size_budget=5) for i in range(30)]
    for n in (2, 3):
        names = [f"v{i}" for i in range(n)]
        pairs = list(itertools.combinations(names, 2))
        for bits in range(1 << len(pairs)):
            g = Graph.build(names, [p for i, p in enumerate(pairs) if bits >> i & 1])
            rename = {v: w for v, w in zip(names, reversed(names))}
            h = Graph.build([rename[v] for v in names],
                            [(rename[a], rename[b]) for a, b in g.edges])
            assert [eval_graph(g, s) for s in sentences] == [eval_graph(h, s) for s in sentences]
