from __future__ import annotations

import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from galgraph.budget import Budget
from galgraph.catalogue import count, small_group
from galgraph.codec import (
    choose_parameters,
    decode_graph,
    decode_graph_full,
    encode_graph,
    geometric_sum_check,
    is_prime,
    p_obstruction_check,
    primitive_root,
    relation_identity_check,
    split_check,
)
from galgraph.conditions import (
    FAIL,
    PASS,
    SKIPPED,
    check_g1,
    check_g2,
    verify_graph_conditions,
)
from galgraph.graphs import (
    Graph,
    GraphError,
    all_graphs,
    are_isomorphic,
    format_graph,
    parse_graph,
)
from galgraph.groups import CyclicGroup, DirectProduct, GroupError, Subgroup
from galgraph.homs import is_isomorphic, kernels_of_epimorphisms


K1 = Graph.build(["a"])
K2 = Graph.build(["a", "b"], [("a", "b")])
E2 = Graph.build(["a", "b"])


def sieve_params(p_hat):
    """Independent oracle: smallest primes s > p̂, r ≡ 1 (s), t ≡ 1 (s) with t > r."""
    primes = [n for n in range(2, 2000) if all(n % d for d in range(2, int(n ** 0.5) + 1))]
    s = next(p for p in primes if p > p_hat)
    r = next(p for p in primes if p > s and p % s == 1)
    t = next(p for p in primes if p > r and p % s == 1)
    pr = next(g for g in range(2, r) if len({pow(g, e, r) for e in range(r - 1)}) == r - 1)
    return s, r, t, pr


# -- parameters -------------------------------------------------------------------

@pytest.mark.parametrize("p_hat", [2, 3, 5, 7])
def test_parameters_match_sieve(p_hat):
    P = choose_parameters(p_hat)
    assert (P.s, P.r, P.t, P.p_r) == sieve_params(p_hat)
    assert P.t > P.r > P.s > P.p_hat
    assert P.r % P.s == 1 and P.t % P.s == 1
    assert P.k == (P.r - 1) // P.s


def test_parameters_p2(P2):
    assert (P2.s, P2.r, P2.t, P2.p_r, P2.k) == (3, 7, 13, 3, 2)
    assert (P2.D.order, P2.U.order, P2.W.order) == (21, 13, 5733)
    assert P2.digest() == "p_hat=2 s=3 r=7 t=13"


def test_parameters_p3(P3):
    assert (P3.s, P3.r, P3.t) == (5, 11, 31)


@pytest.mark.parametrize("bad", [0, 1, 4, 9, 15])
def test_parameters_reject_nonprime(bad):
    with pytest.raises(ValueError, match="not prime"):
        choose_parameters(bad)


def test_primitive_root_and_primality():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    for r in (7, 11, 13, 31, 101):
        g = primitive_root(r)
        assert len({pow(g, e, r) for e in range(r - 1)}) == r - 1


def test_split_sequence_of_params(P2):
    lam, theta, W, DxD = P2.lam, P2.theta, P2.W, P2.DxD
    assert lam.verify() and theta.verify()
    assert all(lam(theta(x)) == x for x in range(DxD.order))
    assert lam.kernel().order == 13
    assert lam.kernel() == Subgroup.generated(W, [P2.u_generator()])


def test_relation_identity(P2, P3):
    D = P2.D
    # β·γ = γ²·β since 3² ≡ 2 mod 7
    assert D.mul(P2.beta, P2.gamma) == D.mul(D.power(P2.gamma, 2), P2.beta)
    assert relation_identity_check(P2) and relation_identity_check(P3)


def test_geometric_sum(P2, P3):
    assert 3 ** 2 + 3 ** 4 + 3 ** 6 == 819 == 117 * 7
    assert geometric_sum_check(P2) and geometric_sum_check(P3)


# -- graph text format ------------------------------------------------------------

def test_graph_format_roundtrip():
    text = "# a path\nv c\nv a\n\nv b\ne b a\ne c b\n"
    g = parse_graph(text)
    assert format_graph(g) == "v a\nv b\nv c\ne a b\ne b c\n"
    assert parse_graph(format_graph(g)) == g


@pytest.mark.parametrize("text", ["v a\ne a a\n", "v a\ne a b\n", "v a\nv a\n", "x y\n"])
def test_graph_format_errors(text):
    with pytest.raises(GraphError):
        parse_graph(text)


def test_all_graphs_counts_against_networkx():
    atlas = nx.graph_atlas_g()
    for n in range(1, 5):
        ours = all_graphs(n)
        theirs = [g for g in atlas if g.number_of_nodes() == n]
        assert len(ours) == len(theirs)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.data())
def test_graph_isomorphism_against_networkx(n, data):
    pairs = list(itertools.combinations(range(n), 2))
    e1 = data.draw(st.sets(st.sampled_from(pairs))) if pairs else set()
    e2 = data.draw(st.sets(st.sampled_from(pairs))) if pairs else set()
    names = [f"v{i}" for i in range(n)]
    g = Graph.build(names, [(names[a], names[b]) for a, b in e1])
    h = Graph.build(names, [(names[a], names[b]) for a, b in e2])
    G, H = nx.Graph(), nx.Graph()
    G.add_nodes_from(range(n))
    H.add_nodes_from(range(n))
    G.add_edges_from(e1)
    H.add_edges_from(e2)
    assert are_isomorphic(g, h) == nx.is_isomorphic(G, H)


# -- encoding ---------------------------------------------------------------------

def test_encode_examples(P2):
    G1 = encode_graph(K1, P2)
    assert G1.order == 21 and is_isomorphic(G1, P2.D)
    G2 = encode_graph(K2, P2)
    assert G2.order == 5733 and is_isomorphic(G2, P2.W)
    assert encode_graph(E2, P2).order == 441
    with pytest.raises(GraphError):
        encode_graph(Graph.build([]), P2)


def lazy_order(graph, P):
    """|{(d̄, w̄) : λ(w_r) = (d_a, d_b)}| by enumeration of d̄ and fibre counting."""
    lam = P.lam.image_array()
    fibre = np.bincount(lam, minlength=P.DxD.order)
    pos = {v: i for i, v in enumerate(graph.vertices)}
    total = 0
    for dbar in itertools.product(range(P.D.order), repeat=len(graph.vertices)):
        prod = 1
        for a, b in graph.sorted_edges():
            prod *= int(fibre[P.DxD.pack(dbar[pos[a]], dbar[pos[b]])])
        total += prod
    return total


@pytest.mark.parametrize("g", [K1, E2, K2], ids=["K1", "E2", "K2"])
def test_order_law(P2, g):
    enc = encode_graph(g, P2)
    assert enc.order == 21 ** len(g.vertices) * 13 ** len(g.edges) == lazy_order(g, P2)


def test_order_law_three_vertices(P2):
    for g in all_graphs(3):
        assert encode_graph(g, P2).order == 21 ** 3 * 13 ** len(g.edges)


def test_membership_and_components(P2):
    enc = encode_graph(K2, P2)
    rng = np.random.default_rng(3)
    for x in rng.integers(0, enc.order, 200):
        dbar, wbar = enc.components(int(x))
        assert enc.is_member(dbar, wbar)
        assert enc.from_components(dbar, wbar) == x
    dbar, wbar = enc.components(5)
    W, DxD = P2.W, P2.DxD
    u, dd = W.unpack(wbar[0])
    wrong = (W.pack(u, DxD.mul(dd, DxD.pack(P2.gamma, 0))),)
    assert not enc.is_member(dbar, wrong)
    with pytest.raises(GroupError):
        enc.from_components(dbar, wrong)
    with pytest.raises(GroupError):
        enc.from_components(dbar[:1], wbar)


def test_encoded_projections_are_homomorphisms(P2):
    enc = encode_graph(K2, P2)
    for phi in (enc.pi_vertex(0), enc.pi_vertex(1), enc.pi_edge(0), enc.pi_A()):
        assert phi.verify() and phi.is_surjective()


# -- decoding ---------------------------------------------------------------------

@pytest.fixture(scope="module")
def decoded_w(P2):
    return decode_graph_full(P2.W, P2)


def test_decode_structural_examples(P2, decoded_w):
    d = decode_graph(P2.D, P2)
    assert are_isomorphic(d, K1)
    assert are_isomorphic(decoded_w.graph, K2)
    dd = decode_graph(P2.DxD, P2)
    assert are_isomorphic(dd, E2)


def test_decode_w_vertices_are_the_factor_preimages(P2, decoded_w):
    res = decoded_w
    W, DxD, D = P2.W, P2.DxD, P2.D
    limg = P2.lam.image_array()
    first, second = np.divmod(limg, D.order)
    # U ⋊ θ(D×1) is the kernel of the second-coordinate projection, and vice versa
    expected = {Subgroup(W, second == D.identity).key, Subgroup(W, first == D.identity).key}
    assert {K.subgroup().key for K in res.kernels} == expected


@pytest.mark.parametrize("g", [K1, E2, K2], ids=["K1", "E2", "K2"])
@pytest.mark.parametrize("orientation", ["canonical", "reversed"])
def test_roundtrip_small(P2, g, orientation):
    assert are_isomorphic(decode_graph(encode_graph(g, P2, orientation), P2), g)


def test_edgeless_vertex_kernels(P2):
    enc = encode_graph(E2, P2)
    res = decode_graph_full(enc, P2)
    got = {K.subgroup().key for K in res.kernels}
    assert got == {enc.pi_vertex(a).kernel().key for a in range(2)}


def test_decode_targeted_matches_exhaustive(P2, decoded_w):
    assert decoded_w.method == "exhaustive"
    assert decode_graph(P2.W, P2, method="targeted") == decoded_w.graph


def test_decode_output_is_canonical(P2):
    g = decode_graph(P2.DxD, P2)
    assert g.vertices == ("k0", "k1")
    assert format_graph(g) == format_graph(decode_graph(P2.DxD, P2))


# -- split sequence and obstruction ------------------------------------------------

@pytest.mark.parametrize("g", [K1, E2, K2], ids=["K1", "E2", "K2"])
def test_split_check(P2, g):
    enc = encode_graph(g, P2)
    assert split_check(enc)
    ker = enc.pi_A().kernel()
    assert ker.order == 13 ** len(g.edges)


def test_split_single_vertex_is_isomorphism(P2):
    enc = encode_graph(K1, P2)
    pi = enc.pi_A()
    assert pi.kernel().order == 1
    assert all(pi(enc.section(x)) == x for x in range(21))


def test_p_obstruction_examples(P2):
    assert p_obstruction_check(CyclicGroup(1), P2)
    assert p_obstruction_check(CyclicGroup(2), P2)
    assert p_obstruction_check(DirectProduct(CyclicGroup(2), CyclicGroup(2)), P2)
    with pytest.raises(ValueError):
        p_obstruction_check(CyclicGroup(3), P2)


@pytest.mark.parametrize("n", [2, 4, 8])
def test_p_obstruction_two_groups(P2, n):
    for i in range(1, count(n) + 1):
        assert p_obstruction_check(small_group(n, i), P2)


# -- graph conditions -------------------------------------------------------------

def test_g1_examples(P2):
    assert check_g1(P2.D, P2.U).status == PASS
    assert check_g1(CyclicGroup(7), CyclicGroup(7)).status == FAIL


def test_g2_examples(P2):
    assert check_g2(P2.D, 2).status == PASS
    assert check_g2(P2.D, 0).status == SKIPPED
    v = check_g2(CyclicGroup(6), 2)
    assert v.status == FAIL and "|I|=2" in v.detail


def test_g2_kernels_are_coordinate_kernels(P2):
    ks = kernels_of_epimorphisms(P2.DxD, P2.D)
    assert len(ks) == 2


def test_verify_bound_zero_is_not_pass(P2):
    rep = verify_graph_conditions(P2, g2_index_bound=0)
    assert rep.verdicts["G2"].status == SKIPPED
    assert not rep.all_pass


def test_verify_budget_never_passes(P2):
    rep = verify_graph_conditions(P2, g2_index_bound=2, budget=Budget(max_nodes=10))
    statuses = {v.status for v in rep.verdicts.values()}
    assert "INCONCLUSIVE" in statuses
    assert not rep.all_pass


@pytest.mark.slow
def test_verify_p2_monotone(P2):
    one = verify_graph_conditions(P2, g2_index_bound=1)
    two = verify_graph_conditions(P2, g2_index_bound=2)
    assert one.all_pass and two.all_pass
