"""Subgroup, normal-subgroup and quotient algorithms on enumerable groups."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .budget import Budget, BudgetExceeded, ensure
from .groups import (
    ENUM_LIMIT,
    QUOTIENT_LIMIT,
    DenseGroup,
    FiniteGroup,
    GroupError,
    Homomorphism,
    Subgroup,
    as_group,
    closure_mask,
)

FULL_LATTICE_LIMIT = 500


def _require_enumerable(G: FiniteGroup, what: str) -> None:
    if G.order > ENUM_LIMIT:
        raise BudgetExceeded(f"{what} on a group of order {G.order}", 0, 0.0)


def subgroup_generated(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    return Subgroup.generated(G, S)


def conjugacy_labels(G: FiniteGroup) -> np.ndarray:
    """Class label per element; classes numbered by their least element."""
    cache = G.__dict__.get("_class_labels")
    if cache is not None:
        return cache
    _require_enumerable(G, "conjugacy classes")
    t = G.table()
    if t is not None:
        lab = kernels.conjugacy_labels(t, G.inverses())
    else:
        n = G.order
        everything = np.arange(n, dtype=np.int64)
        inv_all = G.inverses().astype(np.int64)
        lab = np.full(n, -1, dtype=np.int32)
        c = 0
        for x in range(n):
            if lab[x] >= 0:
                continue
            cls = G.mul_vec(G.mul_vec(everything, x), inv_all)
            lab[cls] = c
            c += 1
    lab.flags.writeable = False
    G.__dict__["_class_labels"] = lab
    return lab


def class_representatives(G: FiniteGroup) -> list[int]:
    lab = conjugacy_labels(G)
    _, first = np.unique(lab, return_index=True)
    return sorted(int(x) for x in first)


def conjugate_set(G: FiniteGroup, g: int, members: np.ndarray) -> np.ndarray:
    """g M g^-1 as an index array."""
    return G.mul_vec(G.mul_vec(g, members), G.inv(g))


def is_normal(G: FiniteGroup, H: Subgroup) -> bool:
    """True iff g H g^-1 = H for every g; generators of G suffice."""
    members = H.members
    for g in G.presentation().gens:
        if not H.mask[conjugate_set(G, g, members)].all():
            return False
    return True


def normal_closure(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    gens = [int(x) for x in S if int(x) != G.identity]
    mask = closure_mask(G, gens)
    ggens = G.presentation().gens
    changed = True
    while changed:
        changed = False
        for g in ggens:
            for x in list(gens):
                y = G.conj(g, x)
                if not mask[y]:
                    gens.append(y)
                    mask = closure_mask(G, gens)
                    changed = True
    sub = Subgroup(G, mask)
    return sub


def center(G: FiniteGroup) -> Subgroup:
    _require_enumerable(G, "center")
    every = np.arange(G.order, dtype=np.int64)
    mask = np.ones(G.order, dtype=bool)
    for g in G.presentation().gens:
        mask &= G.mul_vec(every, g) == G.mul_vec(g, every)
    return Subgroup(G, mask)


def centralizer(G: FiniteGroup, xs: Iterable[int], within: Subgroup | None = None) -> Subgroup:
    _require_enumerable(G, "centralizer")
    every = np.arange(G.order, dtype=np.int64)
    mask = np.ones(G.order, dtype=bool) if within is None else within.mask.copy()
    for x in xs:
        mask &= G.mul_vec(every, x) == G.mul_vec(x, every)
    return Subgroup(G, mask)


def derived_subgroup(G: FiniteGroup) -> Subgroup:
    gens = G.presentation().gens
    comms = [G.mul(G.mul(a, b), G.mul(G.inv(a), G.inv(b))) for a in gens for b in gens]
    return normal_closure(G, comms)


def element_order(G: FiniteGroup, g: int) -> int:
    return G.element_order(g)


# ---------------------------------------------------------------------------
# lattices
# ---------------------------------------------------------------------------

def _join(G: FiniteGroup, A: Subgroup, B: Subgroup) -> Subgroup:
    gens = list(A.generators()) + list(B.generators())
    return Subgroup(G, closure_mask(G, gens))


def _lattice_by_joins(G: FiniteGroup, atoms: list[Subgroup], budget: Budget,
                      what: str) -> list[Subgroup]:
    """Every join of a nonempty subset of ``atoms``, plus the trivial subgroup."""
    trivial = Subgroup.trivial(G)
    seen: dict[bytes, Subgroup] = {trivial.key: trivial}
    atoms = list({a.key: a for a in atoms}.values())
    queue = [trivial]
    for N in queue:
        for C in atoms:
            if C.issubset(N):
                continue
            budget.tick(what)
            J = _join(G, N, C)
            if J.key not in seen:
                seen[J.key] = J
                queue.append(J)
    return sorted(seen.values(), key=Subgroup.sort_key)


def normal_lattice(G: FiniteGroup, budget: Budget | None = None) -> list[Subgroup]:
    """All normal subgroups, sorted by (index, members)."""
    cached = G.__dict__.get("_normal_lattice")
    if cached is not None:
        return cached
    _require_enumerable(G, "normal subgroup lattice")
    budget = ensure(budget)
    atoms = {}
    for x in class_representatives(G):
        if x != G.identity:
            C = normal_closure(G, [x])
            atoms[C.key] = C.mask
    budget.check_time("normal subgroup lattice")
    rows = np.array(list(atoms.values()), dtype=np.uint8).reshape(len(atoms), G.order)
    room = budget.max_nodes - budget.nodes if budget.max_nodes is not None else 1 << 62
    masks = kernels.normal_joins(G.table(), np.ascontiguousarray(rows), G.identity, max(room, 1))
    if masks is None:
        raise BudgetExceeded("normal subgroup lattice", budget.max_nodes, budget.elapsed)
    budget.tick("normal subgroup lattice", len(masks))
    out = sorted((Subgroup(G, m.astype(bool)) for m in masks), key=Subgroup.sort_key)
    G.__dict__["_normal_lattice"] = out
    return out


def enumerate_normal_subgroups(G: FiniteGroup, max_index: int | None = None,
                               budget: Budget | None = None) -> list[Subgroup]:
    """Normal subgroups of index at most ``max_index``, each once, sorted by index.

    Groups without a dense table use the low-index route: kernels of
    epimorphisms onto every catalogued group of order at most ``max_index``.
    """
    if G.table() is None and "_normal_lattice" not in G.__dict__:
        if max_index is None:
            raise BudgetExceeded(f"full normal lattice of a structured group of order {G.order}",
                                 0, 0.0)
        return low_index_normal_subgroups(G, max_index, budget)
    lattice = normal_lattice(G, budget)
    if max_index is None:
        return list(lattice)
    return [N for N in lattice if N.index <= max_index]


def low_index_normal_subgroups(G: FiniteGroup, max_index: int,
                               budget: Budget | None = None) -> list[Subgroup]:
    from .catalogue import MAX_ORDER, iter_small_groups
    from .homs import epimorphism_kernels

    if max_index > MAX_ORDER:
        raise BudgetExceeded(f"low-index enumeration beyond index {MAX_ORDER}", 0, 0.0)
    budget = ensure(budget)
    out = {}
    for Q in iter_small_groups(max_index):
        if G.order % Q.order:
            continue
        for K in epimorphism_kernels(G, Q, budget, materialize=True):
            S = K.subgroup()
            out.setdefault(S.key, S)
    return sorted(out.values(), key=Subgroup.sort_key)


def subgroup_lattice(G: FiniteGroup, budget: Budget | None = None,
                     limit: int = FULL_LATTICE_LIMIT) -> list[Subgroup]:
    """Every subgroup, as joins of cyclic subgroups."""
    cached = G.__dict__.get("_subgroup_lattice")
    if cached is not None:
        return cached
    if G.order > limit:
        raise BudgetExceeded(f"full subgroup lattice of order {G.order} > {limit}; "
                             "use frattini_trivial_certificate", 0, 0.0)
    budget = ensure(budget)
    cyclic = [Subgroup.generated(G, [g]) for g in range(G.order) if g != G.identity]
    out = _lattice_by_joins(G, cyclic, budget, "subgroup lattice")
    G.__dict__["_subgroup_lattice"] = out
    return out


def maximal_subgroups(G: FiniteGroup, budget: Budget | None = None) -> list[Subgroup]:
    proper = [H for H in subgroup_lattice(G, budget) if H.order < G.order]
    return [H for H in proper
            if not any(H.order < K.order and H.issubset(K) for K in proper)]


def frattini(G: FiniteGroup, budget: Budget | None = None) -> Subgroup:
    """Intersection of all maximal subgroups (exact; small groups only)."""
    if G.order == 1:
        return Subgroup.whole(G)
    mask = np.ones(G.order, dtype=bool)
    for M in maximal_subgroups(G, budget):
        mask &= M.mask
    return Subgroup(G, mask)


@dataclass
class Certificate:
    ok: bool
    reason: str
    witness: int | None = None
    element: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def double_coset_reps(G: FiniteGroup, M: Subgroup) -> list[int]:
    """One element from each double coset M g M with g outside M."""
    members = M.members
    seen = M.mask.copy()
    reps = []
    for g in range(G.order):
        if seen[g]:
            continue
        reps.append(g)
        left = G.mul_vec(members, g)
        step = max(1, 4_000_000 // len(members))
        for lo in range(0, len(left), step):
            seen[G.mul_vec(left[lo:lo + step, None], members[None, :]).ravel()] = True
    return reps


def is_maximal(G: FiniteGroup, M: Subgroup) -> tuple[bool, int | None]:
    """(True, None) if M is maximal, else (False, g) with ⟨M, g⟩ proper."""
    if M.order == G.order:
        return False, None
    mg = list(M.generators())
    for g in double_coset_reps(G, M):
        if not closure_mask(G, mg + [g]).all():
            return False, g
    return True, None


def frattini_trivial_certificate(G: FiniteGroup, witnesses: Sequence[Subgroup]) -> Certificate:
    """Sound one-sided proof that Φ(G) = 1.

    Each witness must be maximal (checked over double-coset representatives)
    and the witnesses must intersect trivially.
    """
    if G.order == 1:
        return Certificate(True, "trivial group")
    mask = np.ones(G.order, dtype=bool)
    for i, M in enumerate(witnesses):
        if M.order == G.order:
            return Certificate(False, f"witness {i} is not proper", witness=i)
        ok, g = is_maximal(G, M)
        if not ok:
            return Certificate(False, f"witness {i} is not maximal: ⟨M, {g}⟩ is proper",
                               witness=i, element=g)
        mask &= M.mask
    if mask.sum() != 1:
        return Certificate(False, f"witnesses intersect in {int(mask.sum())} elements")
    return Certificate(True, f"{len(witnesses)} maximal witnesses intersect trivially")


def strict_basis(G: FiniteGroup, delta: Subgroup, N: Subgroup,
                 budget: Budget | None = None) -> list[Subgroup]:
    """All subgroups H with HN = ΔN."""
    if not is_normal(G, N):
        raise GroupError("N must be normal")
    target = _join(G, delta, N)
    return [H for H in subgroup_lattice(G, budget) if _join(G, H, N) == target]


# ---------------------------------------------------------------------------
# quotients and composition factors
# ---------------------------------------------------------------------------

def coset_labels(G: FiniteGroup, N: Subgroup) -> np.ndarray:
    """Left-coset label per element, numbered by least element."""
    members = N.members.astype(np.int32)
    t = G.table()
    if t is not None:
        return kernels.coset_labels(t, members)
    lab = np.full(G.order, -1, dtype=np.int32)
    c = 0
    for g in range(G.order):
        if lab[g] < 0:
            lab[G.mul_vec(g, members)] = c
            c += 1
    return lab


def quotient(G: FiniteGroup, N: Subgroup, name: str | None = None,
             check: bool = True) -> tuple[DenseGroup, Homomorphism]:
    """G/N as a dense group with the projection homomorphism."""
    if check and not is_normal(G, N):
        raise GroupError("quotient by a non-normal subgroup")
    _require_enumerable(G, "quotient")
    q = G.order // N.order
    if q > QUOTIENT_LIMIT:
        raise BudgetExceeded(f"quotient of order {q} too large to tabulate", 0, 0.0)
    lab = coset_labels(G, N)
    _, reps = np.unique(lab, return_index=True)
    table = lab[G.mul_vec(reps[:, None], reps[None, :])]
    Q = DenseGroup(table, name=name or f"{G.name}/N", check=False)
    proj = Homomorphism(G, Q, [int(lab[g]) for g in G.presentation().gens])
    proj._image_array = lab.astype(np.int64)
    return Q, proj


def _is_simple(G: FiniteGroup) -> bool:
    return all(normal_closure(G, [x]).order == G.order
               for x in class_representatives(G) if x != G.identity)


def minimal_normal_subgroup(G: FiniteGroup, rng: random.Random | None = None) -> Subgroup:
    """Smallest normal closure of a single element; ties broken by ``rng``."""
    closures = {}
    for x in class_representatives(G):
        if x == G.identity:
            continue
        N = normal_closure(G, [x])
        closures.setdefault(N.key, N)
    best = min(N.order for N in closures.values())
    options = sorted((N for N in closures.values() if N.order == best), key=Subgroup.sort_key)
    return rng.choice(options) if rng is not None else options[0]


def composition_factors(G: FiniteGroup, seed: int | None = None) -> list:
    """Multiset of composition factors, sorted.

    Abelian factors are reported by their prime order; nonabelian simple
    factors as ("nonabelian", order).
    """
    rng = random.Random(seed) if seed is not None else None
    return sorted(_factors(G, rng), key=lambda f: (isinstance(f, tuple), f if isinstance(f, int) else f[1]))


def _factors(G: FiniteGroup, rng) -> list:
    if G.order == 1:
        return []
    N = minimal_normal_subgroup(G, rng)
    if N.order == G.order:
        return [G.order] if G.is_abelian else [("nonabelian", G.order)]
    sub, _ = as_group(N)
    Q, _ = quotient(G, N, check=False)
    return _factors(sub, rng) + _factors(Q, rng)


def is_pi_number(n: int, primes: Iterable[int]) -> bool:
    for p in primes:
        while n % p == 0:
            n //= p
    return n == 1
