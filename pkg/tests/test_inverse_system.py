from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from galgraph.catalogue import count, small_group
from galgraph.codec import encode_graph
from galgraph.formulas import FormulaError
from galgraph.graphs import Graph
from galgraph.groups import CyclicGroup, DirectProduct, Homomorphism, Subgroup
from galgraph.inverse_system import (
    LAnd,
    LAtom,
    LExists,
    LForall,
    LImplies,
    LNot,
    LOr,
    LTrue,
    SortError,
    build_inverse_system,
    check_laws,
    correspondence_check,
    count_normal_up_to,
    embed_inverse_system,
    embedding_preserves,
    eval_lg,
    eval_lg_sentence,
    lg_depth,
    lg_to_sexpr,
    max_sort_of,
    parse_lg_sentence,
    phi_nq,
    random_lg_sentence,
    rank_types,
    sort_trivial_up_to,
    transfer_check,
)
from galgraph.subgroups import enumerate_normal_subgroups, quotient

C2 = CyclicGroup(2)
V4 = DirectProduct(CyclicGroup(2), CyclicGroup(2))


def naive_eval(S, f, env=None) -> bool:
    """Oracle: plain recursive satisfaction with no block reordering."""
    env = env or {}
    if isinstance(f, LTrue):
        return True
    if isinstance(f, LAtom):
        vals = [S.element(t.kid, t.cid) if not isinstance(t, str) else env[t] for t in f.args]
        return getattr(S, f.rel)(*vals)
    if isinstance(f, LNot):
        return not naive_eval(S, f.body, env)
    if isinstance(f, LAnd):
        return naive_eval(S, f.left, env) and naive_eval(S, f.right, env)
    if isinstance(f, LOr):
        return naive_eval(S, f.left, env) or naive_eval(S, f.right, env)
    if isinstance(f, LImplies):
        return not naive_eval(S, f.left, env) or naive_eval(S, f.right, env)
    dom = [e for e in range(S.size) if S.index_of(e) <= f.sort]
    q = any if isinstance(f, LExists) else all
    return q(naive_eval(S, f.body, {**env, f.var: e}) for e in dom)


def coset_id(S, kid, g):
    return S.element(kid, int(S.labels[kid][g]))


# -- construction --------------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 5])
def test_trivial_group(n):
    S = build_inverse_system(CyclicGroup(1), n)
    assert S.size == 1 and len(S.domain(n)) == 1 and len(S.domain(1)) == 1


def test_c2_system():
    S = build_inverse_system(C2, 2)
    assert S.size == 3
    assert len(S.domain(1)) == 1 and len(S.domain(2)) == 3
    assert [N.index for N in S.normals] == [1, 2]


def test_d_system(P2):
    S = build_inverse_system(P2.D, 21)
    assert S.size == 1 + 3 + 21
    assert [N.order for N in S.normals] == [21, 7, 1]


def test_max_sort_must_be_positive():
    with pytest.raises(SortError):
        build_inverse_system(C2, 0)


def test_sorts_are_cumulative():
    S = build_inverse_system(small_group(12, 3), 12)
    prev = -1
    for n in range(1, 13):
        d = S.domain(n)
        assert len(d) >= prev
        prev = len(d)
        assert all(S.index_of(e) <= n for e in d)
        assert len(d) == sum(N.index for N in S.normals if N.index <= n)


# -- relation laws ------------------------------------------------------------------------

@pytest.mark.parametrize("nid", [(1, 1), (4, 2), (8, 3), (8, 4), (12, 3), (16, 3), (18, 3), (24, 12)])
def test_laws(nid):
    S = build_inverse_system(small_group(*nid), nid[0])
    assert all(check_laws(S).values()), check_laws(S)


def test_laws_by_brute_force():
    G = small_group(8, 3)
    S = build_inverse_system(G, 8)
    # C functional: each gN has exactly one C-successor in every M ⊇ N
    for e in range(S.size):
        for j, M in enumerate(S.normals):
            succ = [f for f in range(S.size) if S.kernel_of[f] == j and S.C(e, f)]
            assert len(succ) == (1 if S.leq(e, S.element(j, 0)) else 0)
    # P is G/N multiplication
    for k, N in enumerate(S.normals):
        for a in range(G.order):
            for b in range(G.order):
                c = coset_id(S, k, G.mul(a, b))
                assert S.P(coset_id(S, k, a), coset_id(S, k, b), c)


def test_c2_multiplication():
    S = build_inverse_system(C2, 2)
    one, zero = coset_id(S, 1, 1), coset_id(S, 1, 0)
    assert S.P(one, one, zero)
    assert not S.P(one, one, one)
    top = S.element(0, 0)
    assert not S.P(one, one, top)


def test_leq_is_reverse_on_subgroups():
    G = small_group(12, 3)
    S = build_inverse_system(G, 12)
    for i, N in enumerate(S.normals):
        for j, M in enumerate(S.normals):
            assert S.leq(S.element(i, 0), S.element(j, 0)) == N.issubset(M)


# -- sentences ------------------------------------------------------------------------------

def test_parse_roundtrip_and_errors():
    text = "(exists (x sort 2) (forall (y sort 1) (and (leq x y) (not (C y x)))))"
    f = parse_lg_sentence(text)
    assert lg_to_sexpr(f) == text
    assert lg_depth(f) == 2 and max_sort_of(f) == 2
    for bad in ["(exists x (leq x x))", "(leq x)", "(exists (x sort two) true)",
                "(exists (x sort 1) (leq x y))", "(Q x)"]:
        with pytest.raises(FormulaError):
            parse_lg_sentence(bad)


def test_sentence_examples():
    S = build_inverse_system(C2, 2)
    assert eval_lg_sentence(S, parse_lg_sentence("(exists (x sort 1) (leq x x))"))
    assert not eval_lg_sentence(
        S, parse_lg_sentence("(exists (x sort 1) (exists (y sort 1) "
                             "(not (and (leq x y) (leq y x)))))"))
    # constants: kid 1 is the trivial subgroup; 1 + 1 = 0 in C2
    assert eval_lg_sentence(S, parse_lg_sentence("(P (const 1 1) (const 1 1) (const 1 0))"))


def test_sort_overflow_and_unresolved_constant():
    S = build_inverse_system(C2, 2)
    with pytest.raises(SortError):
        eval_lg_sentence(S, parse_lg_sentence("(exists (x sort 3) true)"))
    with pytest.raises(FormulaError, match="unresolved"):
        eval_lg_sentence(S, parse_lg_sentence("(leq (const 5 0) (const 0 0))"))
    with pytest.raises(FormulaError, match="unresolved"):
        eval_lg_sentence(S, parse_lg_sentence("(leq (const 1 2) (const 0 0))"))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from([(2, 1), (4, 2), (6, 1), (6, 2), (8, 3), (12, 3)]))
def test_eval_matches_naive(seed, nid):
    S = build_inverse_system(small_group(*nid), nid[0])
    f = random_lg_sentence(random.Random(seed), min(nid[0], 4), depth=2, size_budget=4)
    assert eval_lg_sentence(S, f) == naive_eval(S, f)


# -- phi_nq -----------------------------------------------------------------------------------

def test_phi_nq_examples():
    S = build_inverse_system(C2, 2)
    assert eval_lg_sentence(S, phi_nq(1, 2))
    assert not eval_lg_sentence(S, phi_nq(2, 2))
    S4 = build_inverse_system(V4, 2)
    assert eval_lg_sentence(S4, phi_nq(3, 2))
    assert not eval_lg_sentence(S4, phi_nq(4, 2))


def test_phi_nq_shape():
    f = phi_nq(2, 5)
    assert max_sort_of(f) == 5 and lg_depth(f) == 3
    assert phi_nq(0, 1) == LExists("N0", 1, LTrue())
    with pytest.raises(ValueError):
        phi_nq(1, 0)


@pytest.mark.parametrize("n", [4, 6, 8, 12, 16, 18, 20, 24])
def test_phi_nq_counting_law(n):
    for i in range(1, count(n) + 1):
        G = small_group(n, i)
        for q in (2, 3, 4):
            S = build_inverse_system(G, q)
            c = count_normal_up_to(S, q)
            assert c == len(enumerate_normal_subgroups(G, q))
            for m in range(0, 5):
                assert eval_lg_sentence(S, phi_nq(m, q)) == (c >= m + 1)


# -- sort triviality ---------------------------------------------------------------------------

def test_sort_trivial_examples(P2):
    assert not sort_trivial_up_to(build_inverse_system(C2, 2), 2)
    assert sort_trivial_up_to(build_inverse_system(CyclicGroup(7), 6), 6)
    enc = encode_graph(Graph.build(["a", "b"], [("a", "b")]), P2)
    assert sort_trivial_up_to(build_inverse_system(enc, 2), 2)
    with pytest.raises(SortError):
        sort_trivial_up_to(build_inverse_system(C2, 2), 3)


# -- correspondence, embedding, transfer ---------------------------------------------------------

def test_correspondence_examples():
    C6 = CyclicGroup(6)
    assert correspondence_check(C6, Subgroup.trivial(C6), 2)
    assert correspondence_check(C6, Subgroup.generated(C6, [2]), 2)
    G = DirectProduct(CyclicGroup(13), CyclicGroup(2))
    K = Subgroup.generated(G, [G.pack(1, 0)])
    assert correspondence_check(G, K, 2)
    assert all(K.issubset(N) for N in enumerate_normal_subgroups(G, 2))


def test_correspondence_rejects_non_normal():
    S3 = small_group(6, 1)
    H = next(Subgroup.generated(S3, [g]) for g in range(6) if S3.element_order(g) == 2)
    with pytest.raises(ValueError):
        correspondence_check(S3, H, 2)


@pytest.mark.parametrize("nid", [(8, 3), (12, 3), (16, 3), (24, 12)])
def test_correspondence_all_normals(nid):
    G = small_group(*nid)
    for K in enumerate_normal_subgroups(G):
        for k in (2, 3, 4):
            assert correspondence_check(G, K, k)


def test_embed_c6_onto_c2():
    C6 = CyclicGroup(6)
    pi = Homomorphism.from_function(C6, C2, lambda x: x % 2)
    SQ = build_inverse_system(C2, 2)
    mapping, SG = embed_inverse_system(pi, SQ)
    assert len(mapping) == 3
    assert embedding_preserves(SQ, SG, mapping)
    # the image of the identity coset of {0} is the identity coset of ⟨2⟩
    e = mapping[coset_id(SQ, 1, 0)]
    assert SG.normals[SG.kernel_of[e]] == Subgroup.generated(C6, [2])


def test_embed_identity():
    G = small_group(12, 3)
    S = build_inverse_system(G, 12)
    mapping, _ = embed_inverse_system(Homomorphism.identity_map(G), S, S)
    assert mapping == {e: e for e in range(S.size)}


def test_embed_sweep():
    rng = random.Random(5)
    cases = 0
    while cases < 10:
        n = rng.choice([8, 12, 16, 18, 24])
        G = small_group(n, rng.randint(1, count(n)))
        normals = [N for N in enumerate_normal_subgroups(G) if 1 < N.order < G.order]
        if not normals:
            continue
        Q, pi = quotient(G, rng.choice(normals))
        SQ = build_inverse_system(Q, Q.order)
        mapping, SG = embed_inverse_system(pi, SQ)
        assert embedding_preserves(SQ, SG, mapping)
        cases += 1


def test_embed_needs_surjection():
    bad = Homomorphism.from_function(C2, CyclicGroup(4), lambda x: 2 * x)
    with pytest.raises(ValueError):
        embed_inverse_system(bad, build_inverse_system(CyclicGroup(4), 2))


def test_transfer_positive():
    G = DirectProduct(CyclicGroup(13), CyclicGroup(2))
    pi = Homomorphism.from_function(G, C2, lambda x: G.unpack(x)[1])
    rng = random.Random(11)
    corpus = [random_lg_sentence(rng, 2, depth=2) for _ in range(60)]
    res = transfer_check(G, pi, 2, rank=2, corpus=corpus)
    assert res["hypothesis"] and res["types_agree"]
    assert res["agree"] == res["total"] == 60


def test_transfer_negative():
    """Without the hypothesis the rank types can differ."""
    G = DirectProduct(CyclicGroup(3), CyclicGroup(2))
    pi = Homomorphism.from_function(G, C2, lambda x: G.unpack(x)[1])
    res = transfer_check(G, pi, 3, rank=1)
    assert not res["hypothesis"] and not res["types_agree"]
    # a concrete witness: C6 has a normal subgroup of index 3, C2 does not
    f = phi_nq(2, 3)
    assert eval_lg_sentence(build_inverse_system(G, 3), f)
    assert not eval_lg_sentence(build_inverse_system(C2, 3), f)


def test_rank_types_separate_c2_c3():
    a = build_inverse_system(C2, 3)
    b = build_inverse_system(CyclicGroup(3), 3)
    assert rank_types(a, 3, 1) != rank_types(b, 3, 1)
    assert rank_types(a, 1, 2) == rank_types(b, 1, 2)


def test_eval_lg_open_formula_env():
    S = build_inverse_system(C2, 2)
    f = LForall("y", 2, LAtom("leq", ("y", "x")))
    top = S.element(0, 0)
    assert eval_lg(S, f, {"x": top})
    assert not eval_lg(S, f, {"x": S.element(1, 0)})
    with pytest.raises(FormulaError):
        eval_lg_sentence(S, f)
