"""Homomorphism search by backtracking over generator images.

Two consistency engines share one driver:

* relator engine: the source has a short presentation; a relator is checked
  as soon as every generator it mentions has an image;
* closure engine: the source is a dense table; each partial assignment is
  extended over the subgroup its generators span.

Candidate images are filtered by element order.  With ``up_to_inner`` the
search returns one homomorphism per conjugacy orbit: at each depth only orbit
representatives under the centralizer of the images fixed so far are tried.
"""

from __future__ import annotations

import functools
from typing import Iterator, Sequence

import numpy as np

from . import kernels
from .budget import Budget, ensure
from .groups import (
    ENUM_LIMIT,
    FiniteGroup,
    GroupError,
    Homomorphism,
    Subgroup,
    closure_mask,
    extend_map,
)
from .subgroups import center, derived_subgroup


def _conj_vec(H: FiniteGroup, c: int, xs: np.ndarray) -> np.ndarray:
    return H.mul_vec(H.mul_vec(c, xs), H.inv(c))


def _orbit_reps(H: FiniteGroup, cands: np.ndarray, conj_gens: Sequence[int]) -> np.ndarray:
    """Least element of each orbit of ⟨conj_gens⟩ acting on ``cands`` by conjugation."""
    if len(cands) <= 1 or not conj_gens:
        return cands
    pos = np.full(H.order, -1, dtype=np.int64)
    pos[cands] = np.arange(len(cands))
    edges = []
    for c in conj_gens:
        j = pos[_conj_vec(H, int(c), cands)]
        ok = j >= 0
        edges.append((np.nonzero(ok)[0], j[ok]))
    lab = np.arange(len(cands))
    while True:
        old = lab.copy()
        for a, b in edges:
            m = np.minimum(lab[a], lab[b])
            np.minimum.at(lab, a, m)
            np.minimum.at(lab, b, m)
        lab = lab[lab]
        if np.array_equal(lab, old):
            break
    return cands[np.unique(lab)]


class _RelatorChecker:
    def __init__(self, H: FiniteGroup, relators: Sequence) -> None:
        self.H = H
        self.relators = list(relators)
        t = H.table()
        self.table = t
        if t is not None:
            self.inv = H.inverses()

    def group(self, idx: Sequence[int]):
        """Pre-flatten a batch of relators for the compiled checker."""
        rels = [self.relators[i] for i in idx]
        if self.table is None:
            return rels
        gen = [g for r in rels for g, _ in r]
        exp = [e for r in rels for _, e in r]
        start = np.cumsum([0] + [len(r) for r in rels]).astype(np.int32)
        return (np.asarray(gen, dtype=np.int32), np.asarray(exp, dtype=np.int32), start)

    def check(self, batch, images: np.ndarray) -> bool:
        H = self.H
        if self.table is not None:
            gen, exp, start = batch
            if len(start) == 1:
                return True
            return kernels.check_relators(self.table, self.inv, images, gen, exp, start,
                                          H.identity)
        for r in batch:
            acc = H.identity
            for g, e in r:
                acc = H.mul(acc, H.power(int(images[g]), e))
            if acc != H.identity:
                return False
        return True


def iter_homomorphisms(G: FiniteGroup, H: FiniteGroup, *, surjective: bool = False,
                       up_to_inner: bool = False, candidates: Sequence | None = None,
                       conj_group: Subgroup | None = None, order_filter: bool = True,
                       aut_perms: np.ndarray | None = None, budget: Budget | None = None,
                       engine: str = "auto") -> Iterator[tuple[int, ...]]:
    """Yield image tuples (aligned with ``G.presentation().gens``) of homomorphisms G -> H.

    ``candidates`` optionally restricts the image of each generator.
    ``conj_group`` reduces modulo conjugation by that subgroup of H
    (``up_to_inner`` is shorthand for the whole of H); candidate sets should
    be invariant under it.  ``aut_perms`` (rows are automorphisms of H as
    permutations) instead yields one homomorphism per orbit of that group.
    """
    budget = ensure(budget)
    if H.order > ENUM_LIMIT:
        raise GroupError(f"target of order {H.order} is too large to search")
    pres = G.presentation()
    gens = pres.gens
    k = len(gens)
    if k == 0:
        if not surjective or H.order == 1:
            yield ()
        return
    if engine == "auto":
        engine = "relators" if pres.short else "closure"
    if engine == "closure" and G.order > ENUM_LIMIT:
        raise GroupError("closure engine needs an enumerable source")

    every = np.arange(H.order, dtype=np.int64)
    cand: list[np.ndarray] = []
    horders = H.element_orders() if order_filter else None
    for i, g in enumerate(gens):
        c = every
        if order_filter:
            og = G.element_order(g)
            c = every[og % horders == 0]
        if candidates is not None and candidates[i] is not None:
            allowed = np.zeros(H.order, dtype=bool)
            allowed[np.asarray(candidates[i], dtype=np.int64)] = True
            c = c[allowed[c]]
        cand.append(c)
    if any(len(c) == 0 for c in cand):
        return

    # assignment order: fewest candidates first, then most relators closed
    rel_slots = [frozenset(g for g, _ in r) for r in pres.relators] if engine == "relators" else []
    order: list[int] = []
    assigned: set[int] = set()
    closed: set[int] = set()
    while len(order) < k:
        def closes(i):
            return sum(1 for j, s in enumerate(rel_slots)
                       if j not in closed and s <= assigned | {i})
        rest = [i for i in range(k) if i not in assigned]
        if not order:
            nxt = min(rest, key=lambda i: (len(cand[i]), -closes(i), i))
        else:
            nxt = min(rest, key=lambda i: (-closes(i), len(cand[i]), i))
        order.append(nxt)
        assigned.add(nxt)
        closed |= {j for j, s in enumerate(rel_slots) if s <= assigned}

    checker = None
    batches = []
    if engine == "relators":
        checker = _RelatorChecker(H, pres.relators)
        done: set[int] = set()
        seen_slots: set[int] = set()
        for slot in order:
            seen_slots.add(slot)
            now = [j for j, s in enumerate(rel_slots) if j not in done and s <= seen_slots]
            done.update(now)
            batches.append(checker.group(now))

    if up_to_inner and conj_group is None:
        conj_group = Subgroup.whole(H)
    hgens = np.asarray(gens, dtype=np.int64)
    images = np.full(k, H.identity, dtype=np.int32)

    # centralizer chains repeat across branches; generating sets are costly
    # on structured targets, so keep them per subgroup
    gen_cache: dict[bytes, tuple[int, ...]] = {}

    def conj_generators(C: Subgroup) -> tuple[int, ...]:
        if C.order == H.order:
            return H.presentation().gens
        key = C.key
        if key not in gen_cache:
            gen_cache[key] = C.generators()
        return gen_cache[key]

    def consistent(depth: int) -> bool:
        if engine == "relators":
            return checker.check(batches[depth], images)
        slots = order[: depth + 1]
        return extend_map(G, H, hgens[slots], images[slots]) is not None

    def rec(depth: int, C, stab: np.ndarray | None = None) -> Iterator[tuple[int, ...]]:
        slot = order[depth]
        options = cand[slot]
        if stab is not None:
            if len(stab) > 1:
                options = options[stab[:, options].min(axis=0) == options]
        elif C is not None and C.order > 1:
            options = _orbit_reps(H, options, conj_generators(C))
        for h in options:
            budget.tick("homomorphism search")
            images[slot] = h
            if not consistent(depth):
                continue
            if depth + 1 == k:
                if surjective and not closure_mask(H, images).all():
                    continue
                yield tuple(int(x) for x in images)
            elif stab is not None:
                yield from rec(depth + 1, None, stab[stab[:, h] == h])
            else:
                nextC = None
                if C is not None and C.order > 1:
                    nextC = Subgroup(H, C.mask & (H.mul_vec(every, int(h)) ==
                                                  H.mul_vec(int(h), every)))
                yield from rec(depth + 1, nextC)
        images[slot] = H.identity

    if aut_perms is not None:
        yield from rec(0, None, np.asarray(aut_perms))
    else:
        yield from rec(0, conj_group)


def homomorphisms(G: FiniteGroup, H: FiniteGroup, **kw) -> list[Homomorphism]:
    return [Homomorphism(G, H, imgs) for imgs in iter_homomorphisms(G, H, **kw)]


def epimorphisms(G: FiniteGroup, H: FiniteGroup, up_to_inner: bool = True,
                 **kw) -> list[Homomorphism]:
    return homomorphisms(G, H, surjective=True, up_to_inner=up_to_inner, **kw)


def automorphisms(G: FiniteGroup, budget: Budget | None = None) -> list[Homomorphism]:
    return epimorphisms(G, G, up_to_inner=False, budget=budget)


AUT_PERMS_LIMIT = 100_000


def small_aut_perms(H: FiniteGroup) -> np.ndarray | None:
    """Aut(H) as a permutation array, or None when it could exceed AUT_PERMS_LIMIT.

    The bound multiplies, over the generators of H, the number of elements of
    the same order; that counts every generator-image tuple an automorphism
    could have.
    """
    if "_aut_perms" in H.__dict__:
        return H.__dict__["_aut_perms"]
    out = None
    if H.order <= ENUM_LIMIT:
        orders = H.element_orders()
        bound = 1
        for g in H.presentation().gens:
            bound *= int(np.count_nonzero(orders == orders[g]))
            if bound > AUT_PERMS_LIMIT:
                break
        if bound <= AUT_PERMS_LIMIT:
            out = np.array([Homomorphism(H, H, imgs).image_array()
                            for imgs in iter_homomorphisms(H, H, surjective=True)],
                           dtype=np.int64)
    H.__dict__["_aut_perms"] = out
    return out


class EpiKernel:
    """The kernel of an epimorphism, usable without enumerating the source.

    Containment between kernels of epimorphisms is decided by a factor
    check: ker φ ≤ ker ψ iff φ(x_i) -> ψ(x_i) extends to a homomorphism on
    the image of φ.
    """

    def __init__(self, epi: Homomorphism) -> None:
        self.epi = epi
        self.source = epi.source
        self._mask = None

    @property
    def index(self) -> int:
        return self.epi.target.order

    @property
    def order(self) -> int:
        return self.source.order // self.index

    def contains(self, g: int) -> bool:
        if self._mask is not None:
            return bool(self._mask[g])
        return self.epi(g) == self.epi.target.identity

    def mask(self) -> np.ndarray:
        if self._mask is None:
            self._mask = self.epi.image_array() == self.epi.target.identity
        return self._mask

    def subgroup(self) -> Subgroup:
        return Subgroup(self.source, self.mask())

    def issubset(self, other: "EpiKernel") -> bool:
        a, b = self.epi, other.epi
        Q = a.target
        return extend_map(Q, b.target, a.images, b.images) is not None

    def __eq__(self, other) -> bool:
        if not isinstance(other, EpiKernel) or other.source is not self.source:
            return NotImplemented
        if self._mask is not None and other._mask is not None:
            return bool(np.array_equal(self._mask, other._mask))
        return self.index == other.index and self.issubset(other)

    __hash__ = None

    def first_difference(self, other: "EpiKernel") -> int | None:
        """Least element in exactly one of the two kernels."""
        if self._mask is not None and other._mask is not None:
            d = np.nonzero(self._mask != other._mask)[0]
            return int(d[0]) if d.size else None
        if self == other:
            return None
        g = 0
        while self.contains(g) == other.contains(g):
            g += 1
        return g


def _kernel_cmp(a: EpiKernel, b: EpiKernel) -> int:
    """Order of sorted member lists, for kernels of equal order."""
    if a.order != b.order:
        return -1 if a.order < b.order else 1
    g = a.first_difference(b)
    if g is None:
        return 0
    return -1 if a.contains(g) else 1


def sort_kernels(ks: list[EpiKernel]) -> list[EpiKernel]:
    return sorted(ks, key=functools.cmp_to_key(_kernel_cmp))


def epimorphism_kernels(G: FiniteGroup, H: FiniteGroup, budget: Budget | None = None,
                        materialize: bool | None = None) -> list[EpiKernel]:
    """Distinct kernels of epimorphisms G ↠ H, in canonical order."""
    budget = ensure(budget)
    if materialize is None:
        materialize = G.order <= ENUM_LIMIT
    if H.order > G.order or G.order % H.order:
        return []
    found: list[EpiKernel] = []
    seen_masks: dict[bytes, EpiKernel] = {}
    # kernels are unchanged by post-composing with an automorphism of H
    auts = small_aut_perms(H)
    for imgs in iter_homomorphisms(G, H, surjective=True, up_to_inner=auts is None,
                                   aut_perms=auts, budget=budget):
        K = EpiKernel(Homomorphism(G, H, imgs))
        if materialize:
            key = np.packbits(K.mask()).tobytes()
            if key not in seen_masks:
                seen_masks[key] = K
                found.append(K)
        elif not any(K == other for other in found):
            found.append(K)
        if H.order == G.order:
            # every epimorphism is then an isomorphism: the kernel is trivial
            break
    return sort_kernels(found)


def kernels_of_epimorphisms(G: FiniteGroup, H: FiniteGroup,
                            budget: Budget | None = None) -> list[Subgroup]:
    return [K.subgroup() for K in epimorphism_kernels(G, H, budget, materialize=True)]


def order_profile(G: FiniteGroup) -> tuple:
    vals, counts = np.unique(G.element_orders(), return_counts=True)
    return tuple(zip(vals.tolist(), counts.tolist()))


def is_isomorphic(G: FiniteGroup, H: FiniteGroup, witness: bool = False,
                  budget: Budget | None = None):
    """Isomorphism test: invariant prefilters, then a search for a surjection."""
    def answer(ok, w=None):
        return (ok, w) if witness else ok

    if G.order != H.order:
        return answer(False)
    if G.order <= ENUM_LIMIT and H.order <= ENUM_LIMIT:
        if order_profile(G) != order_profile(H):
            return answer(False)
        if G.is_abelian != H.is_abelian:
            return answer(False)
        if center(G).order != center(H).order:
            return answer(False)
        if derived_subgroup(G).order != derived_subgroup(H).order:
            return answer(False)
    for imgs in iter_homomorphisms(G, H, surjective=True, up_to_inner=True, budget=budget):
        return answer(True, Homomorphism(G, H, imgs))
    return answer(False)
