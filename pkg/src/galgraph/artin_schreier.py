"""Finite Artin-Schreier structures ⟨G, G′, d : X → G⟩ and their graphs.

A structure carries a group G, a subgroup G′ of index at most 2, a finite
point set with a right G-action and an equivariant map d(x^g) = g⁻¹ d(x) g.
F(X, G) is built on ℤ/2 × G acting on X × G by (x, g)^(e, h) = (x, gh) with d
constant at the central involution (1, 1_G).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .budget import Budget, ensure
from .codec import GraphParams
from .groups import (
    CyclicGroup,
    DirectProduct,
    FiniteGroup,
    GroupError,
    Homomorphism,
    Subgroup,
)
from .graphs import Graph
from .homs import epimorphism_kernels, iter_homomorphisms, order_profile
from .subgroups import is_normal, is_pi_number, normal_closure, normal_lattice, quotient

# exhaustive action and equivariance checks up to this many (point, element) pairs
EXHAUSTIVE_CHECK_LIMIT = 2_000_000


class ASError(ValueError):
    pass


@dataclass
class BooleanSpaceFinite:
    """A finite set with a right action; ``act(points, elements)`` is vectorized."""

    size: int
    group: FiniteGroup
    act: Callable[[np.ndarray, np.ndarray], np.ndarray]
    labels: Sequence | None = None

    def image(self, p, g) -> np.ndarray:
        return np.asarray(self.act(np.asarray(p, dtype=np.int64), np.asarray(g, dtype=np.int64)))

    def check_action(self) -> None:
        G = self.group
        pts = np.arange(self.size)
        if not np.array_equal(self.image(pts, np.full(self.size, G.identity)), pts):
            raise ASError("the identity does not act trivially")
        gens = list(G.presentation().gens)
        if self.size * G.order <= EXHAUSTIVE_CHECK_LIMIT:
            # act(p, g·s) = act(act(p, g), s) over all p, g and generators s implies
            # compatibility for all pairs by induction on word length
            P, E = np.meshgrid(pts, np.arange(G.order), indexing="ij")
            P, E = P.ravel(), E.ravel()
            first = self.image(P, E)
            for s in gens:
                lhs = self.image(P, G.mul_vec(E, s))
                rhs = self.image(first, np.full(len(first), s))
                if not np.array_equal(lhs, rhs):
                    raise ASError("action is not compatible with the group law")
        else:
            for s in gens:
                for t in gens:
                    lhs = self.image(pts, np.full(self.size, G.mul(s, t)))
                    rhs = self.image(self.image(pts, np.full(self.size, s)), np.full(self.size, t))
                    if not np.array_equal(lhs, rhs):
                        raise ASError("action is not compatible with the group law")

    def orbits(self, gens: Sequence[int]) -> np.ndarray:
        """Orbit label per point under ⟨gens⟩, numbered by least point."""
        lab = np.arange(self.size)
        while True:
            old = lab.copy()
            for s in gens:
                img = self.image(np.arange(self.size), np.full(self.size, s))
                np.minimum.at(lab, img, lab)
                lab = np.minimum(lab, lab[img])
            while True:  # pointer jumping
                nxt = lab[lab]
                if np.array_equal(nxt, lab):
                    break
                lab = nxt
            if np.array_equal(lab, old):
                break
        _, dense = np.unique(lab, return_inverse=True)
        return dense.astype(np.int64)


@dataclass
class ASStructure:
    G: FiniteGroup
    Gprime: Subgroup
    X: BooleanSpaceFinite
    d: np.ndarray
    name: str = "AS"

    def validate(self) -> None:
        G = self.G
        if self.Gprime.index > 2:
            raise ASError(f"[G : G′] = {self.Gprime.index} > 2")
        if len(self.d) != self.X.size:
            raise ASError("d must be defined on every point")
        if self.Gprime.index == 2 and np.any(self.Gprime.mask[self.d]):
            raise ASError("d meets G′")
        self.X.check_action()
        pts = np.arange(self.X.size)
        if self.X.size * G.order <= EXHAUSTIVE_CHECK_LIMIT:
            elems = np.arange(G.order)
        else:
            elems = np.array(G.presentation().gens)  # generators suffice for equivariance
        for g in elems:
            moved = self.X.image(pts, np.full(len(pts), g))
            lhs = self.d[moved]
            rhs = G.mul_vec(G.mul_vec(G.inv(int(g)), self.d), int(g))
            if not np.array_equal(lhs, rhs):
                raise ASError(f"d is not equivariant at group element {int(g)}")

    def orbit_count(self) -> int:
        return int(self.X.orbits(self.G.presentation().gens).max()) + 1 if self.X.size else 0


def build_F(X, G: FiniteGroup, validate: bool = True) -> ASStructure:
    """F(X, G) for a point count or a list of point names."""
    labels = list(range(X)) if isinstance(X, int) else list(X)
    nx = len(labels)
    if nx < 1:
        raise ASError("X must be nonempty")
    C2 = CyclicGroup(2)
    Gh = DirectProduct(C2, G, name=f"(Z2 x {G.name})")
    n = G.order

    def act(p, s):
        x, g = np.divmod(p, n)
        h = s % n                                  # second coordinate of (e, h)
        return x * n + G.mul_vec(g, h)

    space = BooleanSpaceFinite(nx * n, Gh, act, labels)
    Gp = Subgroup(Gh, np.arange(Gh.order) < n)     # {0} × G
    d = np.full(nx * n, Gh.pack(1, G.identity), dtype=np.int64)
    A = ASStructure(Gh, Gp, space, d, name=f"F({nx}, {G.name})")
    if validate:
        A.validate()
    return A


def as_quotient(A: ASStructure, N: Subgroup, validate: bool = True) -> ASStructure:
    G = A.G
    if N.order == 1:
        return A
    if not N.issubset(A.Gprime):
        raise ASError("N must lie in G′")
    if not is_normal(G, N):
        raise ASError("N must be normal")
    Q, proj = quotient(G, N, check=False)
    lab = proj.image_array()
    orb = A.X.orbits(N.generators())
    nq = int(orb.max()) + 1
    rep = np.zeros(nq, dtype=np.int64)
    rep[orb[::-1]] = np.arange(A.X.size)[::-1]
    dbar = lab[A.d[rep]]
    if not np.array_equal(lab[A.d], dbar[orb]):
        raise ASError("induced d is not well defined on N-orbits")
    pre = np.zeros(Q.order, dtype=np.int64)
    pre[lab[::-1]] = np.arange(G.order)[::-1]

    def act(p, s):
        return orb[A.X.image(rep[p], pre[s])]

    space = BooleanSpaceFinite(nq, Q, act)
    Gp = Subgroup(Q, np.isin(np.arange(Q.order), lab[A.Gprime.members]))
    out = ASStructure(Q, Gp, space, dbar, name=f"{A.name}/N")
    if validate:
        out.validate()
    return out


def as_isomorphism(A: ASStructure, B: ASStructure, budget: Budget | None = None):
    """A pair (ψ, χ) witnessing A ≅ B, or None.

    Group isomorphisms are searched up to inner automorphisms: if (ψ, χ)
    works then so does (c⁻¹ψc, χ·c).
    """
    budget = ensure(budget)
    G, H = A.G, B.G
    if G.order != H.order or A.X.size != B.X.size or A.Gprime.order != B.Gprime.order:
        return None
    if order_profile(G) != order_profile(H):
        return None
    gens = G.presentation().gens
    orbA = A.X.orbits(gens)
    orbB = B.X.orbits(H.presentation().gens)
    if sorted(np.bincount(orbA)) != sorted(np.bincount(orbB)):
        return None
    reps_a = [int(np.nonzero(orbA == o)[0][0]) for o in range(int(orbA.max()) + 1)]
    allg = np.arange(G.order)
    for imgs in iter_homomorphisms(G, H, surjective=True, up_to_inner=True, budget=budget):
        psi = Homomorphism(G, H, imgs)
        parr = psi.image_array()
        if not np.array_equal(np.sort(parr[A.Gprime.members]), B.Gprime.members):
            continue
        chi = _point_bijection(A, B, parr, reps_a, orbA, orbB, allg, budget)
        if chi is not None:
            return psi, chi
    return None


def _point_bijection(A, B, parr, reps_a, orbA, orbB, allg, budget):
    """Backtrack over orbit representatives; χ(x^g) = χ(x)^ψ(g) fixes the rest."""
    chi = np.full(A.X.size, -1, dtype=np.int64)
    used = np.zeros(int(orbB.max()) + 1, dtype=bool)

    def place(k: int) -> bool:
        if k == len(reps_a):
            return True
        x = reps_a[k]
        src = A.X.image(np.full(len(allg), x), allg)
        want_d = parr[A.d[src]]
        size = int(np.sum(orbA == orbA[x]))
        for ob in np.nonzero(~used)[0]:
            pts = np.nonzero(orbB == ob)[0]
            if len(pts) != size:
                continue
            for y in pts:
                budget.tick("point bijection")
                dst = B.X.image(np.full(len(allg), y), parr)
                # well defined: equal sources need equal targets
                order = np.argsort(src, kind="stable")
                s_sorted, d_sorted = src[order], dst[order]
                same = s_sorted[1:] == s_sorted[:-1]
                if np.any(d_sorted[1:][same] != d_sorted[:-1][same]):
                    continue
                if len(np.unique(dst)) != size:
                    continue
                if not np.array_equal(B.d[dst], want_d):
                    continue
                chi[src] = dst
                used[ob] = True
                if place(k + 1):
                    return True
                used[ob] = False
                chi[src] = -1
        return False

    return chi if place(0) else None


def as_isomorphic(A: ASStructure, B: ASStructure, budget: Budget | None = None) -> bool:
    return as_isomorphism(A, B, budget) is not None


def _kernels_below(A: ASStructure, target: ASStructure, budget: Budget) -> list[Subgroup]:
    """Normal N ≤ G′ with A/N ≅ target (candidates: kernels onto target's group)."""
    out = []
    for K in epimorphism_kernels(A.G, target.G, budget, materialize=True):
        N = K.subgroup()
        if not N.issubset(A.Gprime):
            continue
        if as_isomorphic(as_quotient(A, N), target, budget):
            out.append(N)
    return out


def graph_of_AS(A: ASStructure, X, params: GraphParams,
                budget: Budget | None = None) -> Graph:
    """Vertices: N ≤ G′ with A/N ≅ F(X, D).  Edges: N₁ ≠ N₂ with some
    M ≤ N₁ ∩ N₂ and A/M ≅ F(X, W)."""
    budget = ensure(budget)
    FD = build_F(X, params.D)
    verts = _kernels_below(A, FD, budget)
    names = [f"k{i}" for i in range(len(verts))]
    edges = []
    if len(verts) > 1:
        FW = build_F(X, params.W)
        ms = _kernels_below(A, FW, budget)
        for i in range(len(verts)):
            for j in range(i + 1, len(verts)):
                both = verts[i].mask & verts[j].mask
                if any(not np.any(M.mask & ~both) for M in ms):
                    edges.append((names[i], names[j]))
    return Graph.build(names, edges)


def canonical_graph(A: ASStructure, params: GraphParams, budget: Budget | None = None) -> Graph:
    """Γ with X taken as the orbit space of the points under G′."""
    n = int(A.X.orbits(A.Gprime.generators()).max()) + 1
    return graph_of_AS(A, n, params, budget)


# -- maximal pro-P quotients --------------------------------------------------------

def pro_p_kernel(G: FiniteGroup, primes, budget: Budget | None = None) -> Subgroup:
    """⋂{N ◁ G : G/N a P-group}, from the normal subgroup lattice."""
    mask = np.ones(G.order, dtype=bool)
    for N in normal_lattice(G, budget):
        if is_pi_number(N.index, primes):
            mask &= N.mask
    return Subgroup(G, mask)


def pi_residual(G: FiniteGroup, primes) -> Subgroup:
    """O^P(G): the normal closure of the elements whose order is prime to P."""
    orders = G.element_orders()
    coprime = [int(g) for g in np.nonzero([all(o % p for p in primes) for o in orders])[0]]
    return normal_closure(G, coprime)


def max_proC_quotient(G: FiniteGroup, primes, budget: Budget | None = None):
    N = pro_p_kernel(G, primes, budget)
    Q, proj = quotient(G, N, check=False)
    return Q, proj


def proC_universal_check(G: FiniteGroup, primes, budget: Budget | None = None) -> dict[str, bool]:
    """Universal property of G/N_C, with O^P(G) as a second route to N_C."""
    NC = pro_p_kernel(G, primes, budget)
    family = [N for N in normal_lattice(G, budget) if is_pi_number(N.index, primes)]
    return {
        "quotient_is_P_group": is_pi_number(NC.index, primes),
        "below_every_co_P": all(NC.issubset(M) for M in family),
        "matches_residual": NC == pi_residual(G, primes),
    }


def involutions(G: FiniteGroup) -> list[int]:
    orders = G.element_orders()
    return [int(g) for g in np.nonzero(orders == 2)[0]]
