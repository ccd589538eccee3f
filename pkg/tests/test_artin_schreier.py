from __future__ import annotations

import numpy as np
import pytest

from galgraph.artin_schreier import (
    ASError,
    ASStructure,
    as_isomorphic,
    as_isomorphism,
    as_quotient,
    build_F,
    canonical_graph,
    graph_of_AS,
    involutions,
    max_proC_quotient,
    pi_residual,
    pro_p_kernel,
    proC_universal_check,
)
from galgraph.catalogue import count, small_group
from galgraph.codec import decode_graph
from galgraph.graphs import are_isomorphic
from galgraph.groups import CyclicGroup, DirectProduct, Subgroup
from galgraph.homs import is_isomorphic
from galgraph.subgroups import enumerate_normal_subgroups, quotient

C1, C2, C3, C6 = CyclicGroup(1), CyclicGroup(2), CyclicGroup(3), CyclicGroup(6)


def lifted(A, G, members):
    """{0} × K inside ℤ/2 × G."""
    return Subgroup.from_members(A.G, [A.G.pack(0, int(k)) for k in members])


# -- F(X, G) --------------------------------------------------------------------------

def test_F_trivial_group():
    A = build_F(1, C1)
    assert A.G.order == 2 and A.Gprime.order == 1 and A.X.size == 1
    assert A.d.tolist() == [A.G.pack(1, 0)]


def test_F_of_D(P2):
    A = build_F(2, P2.D)
    assert A.G.order == 42 and A.X.size == 42
    assert A.orbit_count() == 2
    assert A.Gprime.index == 2


@pytest.mark.parametrize("nx", [1, 2, 3])
@pytest.mark.parametrize("nid", [(1, 1), (4, 2), (6, 1), (8, 4), (12, 3)])
def test_F_validates(nx, nid):
    A = build_F(nx, small_group(*nid))
    A.validate()
    assert A.orbit_count() == nx
    # d avoids G′ and is the central involution
    assert not A.Gprime.mask[A.d].any()
    z = int(A.d[0])
    assert all(A.G.mul(z, g) == A.G.mul(g, z) for g in range(A.G.order))


def test_F_rejects_empty():
    with pytest.raises(ASError):
        build_F(0, C2)


def test_invalid_structures_rejected():
    S3 = small_group(6, 1)
    A = build_F(1, S3)
    t = next(g for g in range(6) if S3.element_order(g) == 2)
    # d at a non-central element outside G′ breaks equivariance
    bad = ASStructure(A.G, A.Gprime, A.X, np.full(A.X.size, A.G.pack(1, t)))
    with pytest.raises(ASError, match="equivariant"):
        bad.validate()
    inside = ASStructure(A.G, A.Gprime, A.X, np.full(A.X.size, A.G.identity))
    with pytest.raises(ASError, match="meets"):
        inside.validate()
    tiny = ASStructure(A.G, Subgroup.trivial(A.G), A.X, A.d)
    with pytest.raises(ASError, match="> 2"):
        tiny.validate()


# -- quotients --------------------------------------------------------------------------

def test_quotient_by_trivial_is_identity():
    A = build_F(2, C6)
    assert as_quotient(A, Subgroup.trivial(A.G)) is A


def test_quotient_matches_F_of_quotient():
    A = build_F(1, C6)
    N = lifted(A, C6, [0, 2, 4])
    Q = as_quotient(A, N)
    assert Q.G.order == 4 and Q.X.size == 2
    assert as_isomorphic(Q, build_F(1, C2))


@pytest.mark.parametrize("nid", [(8, 3), (12, 3), (18, 3)])
def test_quotient_orbit_law_and_F_compat(nid):
    G = small_group(*nid)
    A = build_F(2, G)
    for K in enumerate_normal_subgroups(G):
        N = lifted(A, G, K.members)
        Q = as_quotient(A, N)
        assert Q.X.size == int(A.X.orbits(N.generators()).max()) + 1
        assert Q.X.size == 2 * K.index
        assert as_isomorphic(Q, build_F(2, quotient(G, K)[0]))


def test_quotient_rejects_outside_gprime():
    A = build_F(1, C3)
    with pytest.raises(ASError):
        as_quotient(A, Subgroup.generated(A.G, [A.G.pack(1, 0)]))


def test_quotient_functoriality():
    G = small_group(12, 2)               # C12
    A = build_F(1, G)
    normals = sorted(enumerate_normal_subgroups(G), key=lambda K: K.order)
    for K in normals:
        for L in normals:
            if not K.issubset(L) or K.order == 1:
                continue
            N, M = lifted(A, G, K.members), lifted(A, G, L.members)
            AN = as_quotient(A, N)
            _, proj = quotient(A.G, N, check=False)
            lab = proj.image_array()
            MN = Subgroup.from_members(AN.G, np.unique(lab[M.members]))
            assert as_isomorphic(as_quotient(AN, MN), as_quotient(A, M))


# -- isomorphism ---------------------------------------------------------------------------------

def test_isomorphic_examples():
    A = build_F(1, C2)
    assert as_isomorphic(A, A)
    assert as_isomorphic(A, build_F(1, C2))
    assert not as_isomorphic(A, build_F(1, C3))
    assert not as_isomorphic(build_F(1, C6), build_F(2, C3))


def test_isomorphism_witness_is_valid():
    G = small_group(8, 3)
    A, B = build_F(2, G), build_F(2, small_group(8, 3))
    psi, chi = as_isomorphism(A, B)
    assert psi.verify() and psi.is_surjective()
    assert sorted(chi.tolist()) == list(range(B.X.size))
    pts = np.arange(A.X.size)
    for g in range(A.G.order):
        lhs = chi[A.X.image(pts, np.full(len(pts), g))]
        rhs = B.X.image(chi, np.full(len(pts), psi(g)))
        assert np.array_equal(lhs, rhs)
    assert np.array_equal(B.d[chi], psi.image_array()[A.d])


def test_non_isomorphic_same_order():
    # D8 vs Q8 give structures of equal size that are not isomorphic
    assert not as_isomorphic(build_F(1, small_group(8, 3)), build_F(1, small_group(8, 4)))


# -- graphs of AS structures ------------------------------------------------------------------

def test_graph_examples(P2):
    g = graph_of_AS(build_F(1, P2.D), 1, P2)
    assert len(g.vertices) == 1 and not g.edges
    assert len(graph_of_AS(build_F(1, C2), 1, P2).vertices) == 0


@pytest.mark.parametrize("which", ["D", "DxD"])
@pytest.mark.parametrize("nx", [1, 2])
def test_graph_matches_decode(P2, which, nx):
    G = getattr(P2, which)
    assert are_isomorphic(graph_of_AS(build_F(nx, G), nx, P2), decode_graph(G, P2))


def test_canonical_graph(P2):
    assert are_isomorphic(canonical_graph(build_F(2, P2.DxD), P2), decode_graph(P2.DxD, P2))


# -- pro-P quotients and involutions --------------------------------------------------------------

def test_max_proC_examples(P2):
    Q, _ = max_proC_quotient(small_group(8, 3), [2])
    assert Q.order == 8
    Q, _ = max_proC_quotient(C6, [2])
    assert Q.order == 2
    Q, pi = max_proC_quotient(P2.D, [3])
    assert Q.order == 3
    assert pi.kernel() == Subgroup.generated(P2.D, [P2.gamma])


@pytest.mark.parametrize("n", [12, 24, 30, 36, 60])
def test_proC_universal_property(n):
    for i in range(1, count(n) + 1):
        G = small_group(n, i)
        for primes in ([2], [3], [2, 3], [5]):
            assert all(proC_universal_check(G, primes).values())


def test_proC_quotient_is_isomorphic_to_residual_quotient():
    G = small_group(24, 12)             # S4: S4/A4 is the largest 2-quotient
    Q, _ = max_proC_quotient(G, [2])
    assert Q.order == 2
    assert pro_p_kernel(G, [2]) == pi_residual(G, [2])
    Q3, _ = max_proC_quotient(G, [3])
    assert Q3.order == 1


def test_involutions(P2):
    assert involutions(CyclicGroup(21)) == []
    assert involutions(P2.D) == []
    assert len(involutions(DirectProduct(C2, C2))) == 3
    Z2D = DirectProduct(C2, P2.D)
    assert involutions(Z2D) == [Z2D.pack(1, P2.D.identity)]
    for n in (8, 12, 16):
        for i in range(1, count(n) + 1):
            G = small_group(n, i)
            brute = [g for g in range(G.order) if g != G.identity and G.mul(g, g) == G.identity]
            assert involutions(G) == brute


def test_F_group_is_z2_times_g():
    G = small_group(12, 3)
    A = build_F(1, G)
    assert is_isomorphic(A.G, DirectProduct(C2, G))
