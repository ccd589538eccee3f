"""Explicit finite groups on integer element indices.

Every group numbers its elements ``0 .. order-1``.  Small groups keep a dense
Cayley table; products and semidirect products compute their operation from
the factors and only tabulate on demand, up to ``DENSE_LIMIT`` elements.

Each group also carries a presentation over a fixed generator tuple together
with a ``word`` method writing any element in those generators.  Product
constructions get short presentations from their factors; dense tables get
Schreier relators read off a Cayley-graph spanning tree.
"""

from __future__ import annotations

from functools import cached_property
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from . import kernels

DENSE_LIMIT = 6000
QUOTIENT_LIMIT = 4096
ENUM_LIMIT = 200_000

Word = tuple[tuple[int, int], ...]


class GroupError(ValueError):
    """Invalid group data (not associative, bad action, non-normal subgroup...)."""


def invert_word(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def shift_word(w: Word, offset: int) -> Word:
    return tuple((g + offset, e) for g, e in w)


def reduce_word(w: Iterable[tuple[int, int]]) -> Word:
    out: list[list[int]] = []
    for g, e in w:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            out[-1][1] += e
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([g, e])
    return tuple((g, e) for g, e in out)


@dataclass(frozen=True)
class Presentation:
    """Generators (as element indices) and relator words over them.

    ``short`` is False for Schreier presentations of dense tables, whose
    relator count grows with the group order.
    """

    gens: tuple[int, ...]
    relators: tuple[Word, ...]
    short: bool = True


class FiniteGroup:
    """Base class; subclasses supply ``mul``, ``inv`` and a presentation."""

    name: str = "G"
    order: int = 1
    identity: int = 0
    kind: str = "abstract"

    # -- arithmetic ---------------------------------------------------------
    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def inv(self, a: int) -> int:
        raise NotImplementedError

    def mul_vec(self, a, b) -> np.ndarray:
        t = self.table()
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        if t is not None:
            return t[a, b]
        out = np.fromiter((self.mul(int(x), int(y)) for x, y in zip(a.ravel(), b.ravel())),
                          dtype=np.int64, count=a.size)
        return out.reshape(a.shape)

    def inv_vec(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return self.inverses()[a]

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inv(g), -k
        acc, base = self.identity, g
        while k:
            if k & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            k >>= 1
        return acc

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inv(g))

    def elements(self) -> range:
        return range(self.order)

    # -- cached tables ------------------------------------------------------
    def table(self) -> np.ndarray | None:
        if self.order > DENSE_LIMIT:
            return None
        return self._dense_table

    @cached_property
    def _dense_table(self) -> np.ndarray:
        return np.ascontiguousarray(self._build_table(), dtype=np.int32)

    def _build_table(self) -> np.ndarray:
        n = self.order
        idx = np.arange(n, dtype=np.int64)
        out = np.empty((n, n), dtype=np.int32)
        step = max(1, 2_000_000 // n)
        for lo in range(0, n, step):
            rows = idx[lo:lo + step]
            out[lo:lo + step] = self._mul_vec_raw(rows[:, None], idx[None, :])
        return out

    def _mul_vec_raw(self, a, b) -> np.ndarray:
        a, b = np.broadcast_arrays(a, b)
        out = np.fromiter((self.mul(int(x), int(y)) for x, y in zip(a.ravel(), b.ravel())),
                          dtype=np.int64, count=a.size)
        return out.reshape(a.shape)

    def inverses(self) -> np.ndarray:
        return self._inverses

    @cached_property
    def _inverses(self) -> np.ndarray:
        t = self.table()
        if t is not None:
            rows, cols = np.nonzero(t == self.identity)
            inv = np.empty(self.order, dtype=np.int32)
            inv[rows] = cols
            return inv
        return np.fromiter((self.inv(g) for g in range(self.order)), dtype=np.int32,
                           count=self.order)

    def element_orders(self) -> np.ndarray:
        return self._element_orders

    @cached_property
    def _element_orders(self) -> np.ndarray:
        t = self.table()
        if t is not None:
            return kernels.element_orders(t, self.identity)
        n = self.order
        base = np.arange(n, dtype=np.int64)
        cur = base.copy()
        out = np.zeros(n, dtype=np.int32)
        pending = np.ones(n, dtype=bool)
        k = 1
        while pending.any():
            hit = pending & (cur == self.identity)
            out[hit] = k
            pending &= ~hit
            live = np.nonzero(pending)[0]
            cur[live] = self.mul_vec(cur[live], base[live])
            k += 1
        return out

    def element_order(self, g: int) -> int:
        """Least n >= 1 with g^n = 1."""
        k, acc = 1, g
        while acc != self.identity:
            acc = self.mul(acc, g)
            k += 1
        if self.order % k:
            raise GroupError(f"element order {k} does not divide |G| = {self.order}")
        return k

    @cached_property
    def is_abelian(self) -> bool:
        gens = self.presentation().gens
        return all(self.mul(a, b) == self.mul(b, a) for a in gens for b in gens)

    # -- presentations ------------------------------------------------------
    def presentation(self) -> Presentation:
        return self._presentation

    @cached_property
    def _presentation(self) -> Presentation:
        return self._build_presentation()

    def _build_presentation(self) -> Presentation:
        return schreier_presentation(self)

    def word(self, g: int) -> Word:
        return self._tree_word(g)

    def eval_word(self, word: Word, images: Sequence[int]) -> int:
        acc = self.identity
        for gi, e in word:
            acc = self.mul(acc, self.power(images[gi], e))
        return acc

    def _tree_word(self, g: int) -> Word:
        parent, via = self._spanning_tree
        out = []
        while g != self.identity:
            out.append((int(via[g]), 1))
            g = int(parent[g])
        return reduce_word(reversed(out))

    @cached_property
    def _spanning_tree(self) -> tuple[np.ndarray, np.ndarray]:
        gens = self.presentation().gens if "_presentation" in self.__dict__ else greedy_generators(self)
        return spanning_tree(self, gens)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} order={self.order}>"


def greedy_generators(G: FiniteGroup) -> tuple[int, ...]:
    """Repeatedly add the element enlarging the generated subgroup most."""
    gens: list[int] = []
    current = closure_mask(G, gens)
    while current.sum() < G.order:
        best, best_size = -1, -1
        for g in np.nonzero(current == 0)[0]:
            size = int(closure_mask(G, gens + [int(g)]).sum())
            if size > best_size:
                best, best_size = int(g), size
                if size == G.order:
                    break
        gens.append(best)
        current = closure_mask(G, gens)
    return tuple(gens)


def spanning_tree(G: FiniteGroup, gens: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """BFS tree of the right Cayley graph: parent element and generator slot."""
    n = G.order
    parent = np.full(n, -1, dtype=np.int64)
    via = np.full(n, -1, dtype=np.int64)
    parent[G.identity] = G.identity
    frontier = np.array([G.identity], dtype=np.int64)
    while frontier.size:
        fresh = []
        for j, x in enumerate(gens):
            nxt = G.mul_vec(frontier, x)
            new = parent[nxt] < 0
            # first writer wins inside a layer
            cand, src = nxt[new], frontier[new]
            uniq, first = np.unique(cand, return_index=True)
            parent[uniq] = src[first]
            via[uniq] = j
            fresh.append(uniq)
        frontier = np.unique(np.concatenate(fresh)) if fresh else frontier[:0]
    return parent, via


def schreier_presentation(G: FiniteGroup, gens: Sequence[int] | None = None) -> Presentation:
    if gens is None:
        gens = greedy_generators(G)
    gens = tuple(int(g) for g in gens)
    parent, via = spanning_tree(G, gens)

    def tree_word(g: int) -> Word:
        out = []
        while g != G.identity:
            out.append((int(via[g]), 1))
            g = int(parent[g])
        return tuple(reversed(out))

    words = {g: tree_word(g) for g in range(G.order)}
    relators = []
    for g in range(G.order):
        for j, x in enumerate(gens):
            h = G.mul(g, x)
            if parent[h] == g and via[h] == j and h != G.identity:
                continue
            rel = reduce_word(words[g] + ((j, 1),) + invert_word(words[h]))
            if rel:
                relators.append(rel)
    return Presentation(gens, tuple(dict.fromkeys(relators)), short=False)


# ---------------------------------------------------------------------------
# concrete representations
# ---------------------------------------------------------------------------

class DenseGroup(FiniteGroup):
    """A group given by its full Cayley table."""

    kind = "dense-table"

    def __init__(self, table, name: str = "G", check: bool = True) -> None:
        t = np.ascontiguousarray(np.asarray(table), dtype=np.int32)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise GroupError("Cayley table must be a nonempty square array")
        n = t.shape[0]
        if t.min() < 0 or t.max() >= n:
            raise GroupError("table entries out of range")
        self.order = n
        self.name = name
        ident = [e for e in range(n) if np.array_equal(t[e], np.arange(n))
                 and np.array_equal(t[:, e], np.arange(n))]
        if not ident:
            raise GroupError("no identity element")
        self.identity = ident[0]
        self._table = t
        if check:
            self._validate()

    def _validate(self) -> None:
        t, n = self._table, self.order
        srt = np.arange(n)
        if not (np.all(np.sort(t, axis=1) == srt) and np.all(np.sort(t, axis=0) == srt[:, None])):
            raise GroupError("table is not a Latin square (inverses not unique)")
        # Light's test: associativity on a generating set suffices
        gens = greedy_generators(self)
        for g in gens:
            lhs = t[t[:, g][:, None], srt[None, :]]   # (x g) y
            rhs = t[srt[:, None], t[g][None, :]]      # x (g y)
            bad = np.argwhere(lhs != rhs)
            if bad.size:
                x, y = bad[0]
                raise GroupError(f"not associative: ({x}*{g})*{y} != {x}*({g}*{y})")

    def table(self) -> np.ndarray:
        return self._table

    def mul(self, a: int, b: int) -> int:
        return int(self._table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverses()[a])

    def mul_vec(self, a, b) -> np.ndarray:
        return self._table[np.asarray(a), np.asarray(b)].astype(np.int64)


class CyclicGroup(FiniteGroup):
    """C_n written additively on 0..n-1."""

    kind = "cyclic"

    def __init__(self, n: int, name: str | None = None) -> None:
        n = int(n)
        if n < 1:
            raise GroupError(f"cyclic group order must be positive, got {n}")
        self.order = n
        self.name = name or f"C{n}"

    def mul(self, a: int, b: int) -> int:
        return (a + b) % self.order

    def inv(self, a: int) -> int:
        return (-a) % self.order

    def power(self, g: int, k: int) -> int:
        return (g * k) % self.order

    def _mul_vec_raw(self, a, b):
        return (np.asarray(a) + np.asarray(b)) % self.order

    def mul_vec(self, a, b) -> np.ndarray:
        return (np.asarray(a, dtype=np.int64) + np.asarray(b, dtype=np.int64)) % self.order

    def inv_vec(self, a) -> np.ndarray:
        return (-np.asarray(a, dtype=np.int64)) % self.order

    @cached_property
    def is_abelian(self) -> bool:
        return True

    def _build_presentation(self) -> Presentation:
        if self.order == 1:
            return Presentation((), ())
        return Presentation((1,), (((0, self.order),),))

    def word(self, g: int) -> Word:
        return ((0, int(g)),) if g else ()


class DirectProduct(FiniteGroup):
    """G x H; element (g, h) has index g*|H| + h."""

    kind = "direct-product"

    def __init__(self, G: FiniteGroup, H: FiniteGroup, name: str | None = None) -> None:
        self.G, self.H = G, H
        self.order = G.order * H.order
        self.name = name or f"({G.name} x {H.name})"
        self.identity = self.pack(G.identity, H.identity)

    def pack(self, g: int, h: int) -> int:
        return g * self.H.order + h

    def unpack(self, x: int) -> tuple[int, int]:
        return divmod(x, self.H.order)

    def mul(self, a: int, b: int) -> int:
        ag, ah = divmod(a, self.H.order)
        bg, bh = divmod(b, self.H.order)
        return self.G.mul(ag, bg) * self.H.order + self.H.mul(ah, bh)

    def inv(self, a: int) -> int:
        g, h = divmod(a, self.H.order)
        return self.G.inv(g) * self.H.order + self.H.inv(h)

    def _mul_vec_raw(self, a, b):
        return self.mul_vec(a, b)

    def mul_vec(self, a, b) -> np.ndarray:
        t = self.__dict__.get("_dense_table")
        if t is not None:
            return t[np.asarray(a), np.asarray(b)].astype(np.int64)
        ag, ah = np.divmod(np.asarray(a, dtype=np.int64), self.H.order)
        bg, bh = np.divmod(np.asarray(b, dtype=np.int64), self.H.order)
        return self.G.mul_vec(ag, bg) * self.H.order + self.H.mul_vec(ah, bh)

    def inv_vec(self, a) -> np.ndarray:
        g, h = np.divmod(np.asarray(a, dtype=np.int64), self.H.order)
        return self.G.inv_vec(g) * self.H.order + self.H.inv_vec(h)

    @cached_property
    def _inverses(self) -> np.ndarray:
        return self.inv_vec(np.arange(self.order)).astype(np.int32)

    def _build_presentation(self) -> Presentation:
        pg, ph = self.G.presentation(), self.H.presentation()
        k = len(pg.gens)
        gens = tuple(self.pack(x, self.H.identity) for x in pg.gens) + \
            tuple(self.pack(self.G.identity, y) for y in ph.gens)
        rels = list(pg.relators) + [shift_word(r, k) for r in ph.relators]
        for i in range(k):
            for j in range(len(ph.gens)):
                rels.append(((i, 1), (k + j, 1), (i, -1), (k + j, -1)))
        return Presentation(gens, tuple(rels), short=pg.short and ph.short)

    def word(self, x: int) -> Word:
        g, h = divmod(x, self.H.order)
        k = len(self.G.presentation().gens)
        return self.G.word(g) + shift_word(self.H.word(h), k)


class SemidirectProduct(FiniteGroup):
    """N ⋊ H with (n1,h1)(n2,h2) = (n1 * act[h1](n2), h1 h2).

    ``action`` is an array of shape (|H|, |N|) with ``action[h, n]`` the image
    of n under the automorphism attached to h.  Element (n, h) has index
    n*|H| + h.
    """

    kind = "semidirect-product"

    def __init__(self, N: FiniteGroup, H: FiniteGroup, action, name: str | None = None,
                 check: bool = True) -> None:
        act = np.ascontiguousarray(np.asarray(action, dtype=np.int64))
        if act.shape != (H.order, N.order):
            raise GroupError(f"action table must have shape {(H.order, N.order)}, got {act.shape}")
        self.N, self.H, self.action = N, H, act
        self.order = N.order * H.order
        self.name = name or f"({N.name} x| {H.name})"
        self.identity = self.pack(N.identity, H.identity)
        if check:
            check_action(N, H, act)

    def pack(self, n: int, h: int) -> int:
        return n * self.H.order + h

    def unpack(self, x: int) -> tuple[int, int]:
        return divmod(x, self.H.order)

    def mul(self, a: int, b: int) -> int:
        t = self.__dict__.get("_dense_table")
        if t is not None:
            return int(t[a, b])
        an, ah = divmod(a, self.H.order)
        bn, bh = divmod(b, self.H.order)
        return self.N.mul(an, int(self.action[ah, bn])) * self.H.order + self.H.mul(ah, bh)

    def inv(self, a: int) -> int:
        n, h = divmod(a, self.H.order)
        hi = self.H.inv(h)
        return int(self.action[hi, self.N.inv(n)]) * self.H.order + hi

    def _mul_vec_raw(self, a, b):
        return self.mul_vec(a, b)

    def mul_vec(self, a, b) -> np.ndarray:
        t = self.__dict__.get("_dense_table")
        if t is not None:
            return t[np.asarray(a), np.asarray(b)].astype(np.int64)
        an, ah = np.divmod(np.asarray(a, dtype=np.int64), self.H.order)
        bn, bh = np.divmod(np.asarray(b, dtype=np.int64), self.H.order)
        an, ah, bn, bh = np.broadcast_arrays(an, ah, bn, bh)
        return self.N.mul_vec(an, self.action[ah, bn]) * self.H.order + self.H.mul_vec(ah, bh)

    def inv_vec(self, a) -> np.ndarray:
        n, h = np.divmod(np.asarray(a, dtype=np.int64), self.H.order)
        hi = self.H.inv_vec(h)
        return self.action[hi, self.N.inv_vec(n)] * self.H.order + hi

    @cached_property
    def _inverses(self) -> np.ndarray:
        return self.inv_vec(np.arange(self.order)).astype(np.int32)

    def _build_presentation(self) -> Presentation:
        pn, ph = self.N.presentation(), self.H.presentation()
        k = len(pn.gens)
        gens = tuple(self.pack(x, self.H.identity) for x in pn.gens) + \
            tuple(self.pack(self.N.identity, y) for y in ph.gens)
        rels = list(pn.relators) + [shift_word(r, k) for r in ph.relators]
        for j, y in enumerate(ph.gens):
            for i, x in enumerate(pn.gens):
                image = self.N.word(int(self.action[y, x]))
                rels.append(reduce_word(((k + j, 1), (i, 1), (k + j, -1)) + invert_word(image)))
        return Presentation(gens, tuple(rels), short=pn.short and ph.short)

    def word(self, x: int) -> Word:
        n, h = divmod(x, self.H.order)
        k = len(self.N.presentation().gens)
        return self.N.word(n) + shift_word(self.H.word(h), k)


def check_action(N: FiniteGroup, H: FiniteGroup, act: np.ndarray) -> None:
    """Raise GroupError unless ``act`` is a homomorphism H -> Aut(N)."""
    nn = np.arange(N.order)
    for h in range(H.order):
        row = act[h]
        if len(np.unique(row)) != N.order:
            raise GroupError(f"action of h={h} is not a bijection of N")
        for x in N.presentation().gens:
            lhs = row[N.mul_vec(nn, x)]
            rhs = N.mul_vec(row[nn], row[x])
            bad = np.nonzero(lhs != rhs)[0]
            if bad.size:
                raise GroupError(f"action of h={h} is not a homomorphism of N: "
                                 f"fails on the pair ({int(bad[0])}, {x})")
    hh = np.arange(H.order)
    for y in H.presentation().gens:
        prod = H.mul_vec(hh, y)
        composed = act[hh][:, act[y]]      # act[h] o act[y]
        bad = np.nonzero(np.any(act[prod] != composed, axis=1))[0]
        if bad.size:
            raise GroupError(f"action is not a homomorphism H -> Aut(N): fails on the pair "
                             f"({int(bad[0])}, {y})")


# ---------------------------------------------------------------------------
# generic enumeration helpers
# ---------------------------------------------------------------------------

def closure_mask(G: FiniteGroup, gens: Iterable[int]) -> np.ndarray:
    """Boolean mask of ⟨gens⟩."""
    gens = np.asarray([int(g) for g in gens], dtype=np.int32)
    t = G.table()
    if t is not None:
        return kernels.closure(t, gens, G.identity).astype(bool)
    mask = np.zeros(G.order, dtype=bool)
    mask[G.identity] = True
    frontier = np.array([G.identity], dtype=np.int64)
    while frontier.size and gens.size:
        nxt = np.unique(G.mul_vec(frontier[:, None], gens[None, :]).ravel())
        nxt = nxt[~mask[nxt]]
        mask[nxt] = True
        frontier = nxt
    return mask


def extend_map(src: FiniteGroup, dst: FiniteGroup, gens: Sequence[int],
               images: Sequence[int]) -> np.ndarray | None:
    """Image array of the homomorphism ⟨gens⟩ -> dst with gens[i] -> images[i].

    Entries outside ⟨gens⟩ are -1; None when no such homomorphism exists.
    """
    gens = np.asarray(gens, dtype=np.int32)
    images = np.asarray(images, dtype=np.int32)
    ts, td = src.table(), dst.table()
    if ts is not None and td is not None:
        return kernels.extend_hom(ts, td, gens, images, src.identity, dst.identity)
    img = np.full(src.order, -1, dtype=np.int64)
    img[src.identity] = dst.identity
    frontier = np.array([src.identity], dtype=np.int64)
    while frontier.size:
        fresh = []
        for g, h in zip(gens, images):
            nxt = src.mul_vec(frontier, int(g))
            val = dst.mul_vec(img[frontier], int(h))
            known = img[nxt] >= 0
            if np.any(img[nxt[known]] != val[known]):
                return None
            new, vnew = nxt[~known], val[~known]
            img[new] = vnew
            if np.any(img[new] != vnew):
                return None
            fresh.append(new)
        frontier = np.unique(np.concatenate(fresh)) if fresh else frontier[:0]
    return img


# ---------------------------------------------------------------------------
# subgroups and homomorphisms
# ---------------------------------------------------------------------------

class Subgroup:
    """A subgroup stored as a read-only membership mask over the parent."""

    __slots__ = ("parent", "mask", "_key", "_gens")

    def __init__(self, parent: FiniteGroup, mask: np.ndarray) -> None:
        m = np.ascontiguousarray(mask, dtype=bool)
        m.flags.writeable = False
        self.parent = parent
        self.mask = m
        self._key = None
        self._gens = None

    @classmethod
    def from_members(cls, parent: FiniteGroup, members: Iterable[int]) -> "Subgroup":
        mask = np.zeros(parent.order, dtype=bool)
        mask[np.fromiter((int(x) for x in members), dtype=np.int64)] = True
        return cls(parent, mask)

    @classmethod
    def generated(cls, parent: FiniteGroup, gens: Iterable[int]) -> "Subgroup":
        gens = list(gens)
        sub = cls(parent, closure_mask(parent, gens))
        sub._gens = tuple(int(g) for g in gens)
        return sub

    @classmethod
    def whole(cls, parent: FiniteGroup) -> "Subgroup":
        return cls(parent, np.ones(parent.order, dtype=bool))

    @classmethod
    def trivial(cls, parent: FiniteGroup) -> "Subgroup":
        return cls.from_members(parent, [parent.identity])

    @property
    def order(self) -> int:
        return int(self.mask.sum())

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    @property
    def members(self) -> np.ndarray:
        return np.nonzero(self.mask)[0]

    def __contains__(self, g: int) -> bool:
        return bool(self.mask[g])

    def __iter__(self):
        return iter(int(x) for x in self.members)

    def __len__(self) -> int:
        return self.order

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = np.packbits(self.mask).tobytes()
        return self._key

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subgroup) and other.parent is self.parent
                and other.key == self.key)

    def __hash__(self) -> int:
        return hash(self.key)

    def __le__(self, other: "Subgroup") -> bool:
        return self.issubset(other)

    def issubset(self, other: "Subgroup") -> bool:
        return not np.any(self.mask & ~other.mask)

    def intersection(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.parent, self.mask & other.mask)

    def generators(self) -> tuple[int, ...]:
        """A small generating set, grown greedily from the least new element."""
        if self._gens is None:
            gens: list[int] = []
            cur = np.zeros_like(self.mask)
            cur[self.parent.identity] = True
            while not np.array_equal(cur, self.mask):
                g = int(np.nonzero(self.mask & ~cur)[0][-1])
                gens.append(g)
                cur = closure_mask(self.parent, gens)
            self._gens = tuple(gens)
        return self._gens

    def sort_key(self) -> tuple:
        return (self.index, tuple(int(x) for x in self.members))

    def __repr__(self) -> str:
        return f"<Subgroup of {self.parent.name} order={self.order}>"


class Homomorphism:
    """A homomorphism fixed by the images of the source's presentation generators."""

    def __init__(self, source: FiniteGroup, target: FiniteGroup, images: Sequence[int],
                 check: bool = False) -> None:
        self.source, self.target = source, target
        self.images = tuple(int(x) for x in images)
        gens = source.presentation().gens
        if len(self.images) != len(gens):
            raise GroupError("one image per presentation generator is required")
        self._image_array = None
        if check and not self.verify():
            raise GroupError("assignment does not extend to a homomorphism")

    @classmethod
    def from_function(cls, source: FiniteGroup, target: FiniteGroup,
                      f: Callable[[int], int], check: bool = True) -> "Homomorphism":
        return cls(source, target, [f(g) for g in source.presentation().gens], check=check)

    @classmethod
    def identity_map(cls, G: FiniteGroup) -> "Homomorphism":
        return cls(G, G, G.presentation().gens)

    def __call__(self, g: int) -> int:
        if self._image_array is not None:
            return int(self._image_array[g])
        return self.target.eval_word(self.source.word(int(g)), self.images)

    def verify(self) -> bool:
        """Exact check that the assignment is a homomorphism."""
        if self.source.order <= ENUM_LIMIT:
            img = extend_map(self.source, self.target, self.source.presentation().gens,
                             self.images)
            if img is None or np.any(img < 0):
                return False
            self._image_array = img
            return True
        pres = self.source.presentation()
        return all(self.target.eval_word(r, self.images) == self.target.identity
                   for r in pres.relators)

    def image_array(self) -> np.ndarray:
        if self._image_array is None:
            if self.source.order > ENUM_LIMIT:
                raise GroupError("source too large to tabulate")
            img = extend_map(self.source, self.target, self.source.presentation().gens,
                             self.images)
            if img is None:
                raise GroupError("assignment does not extend to a homomorphism")
            self._image_array = img
        return self._image_array

    def kernel(self) -> Subgroup:
        return Subgroup(self.source, self.image_array() == self.target.identity)

    def image(self) -> Subgroup:
        return Subgroup.generated(self.target, self.images)

    def is_surjective(self) -> bool:
        return bool(closure_mask(self.target, self.images).all())

    def compose(self, after: "Homomorphism") -> "Homomorphism":
        """after ∘ self."""
        return Homomorphism(self.source, after.target, [after(x) for x in self.images])


def as_group(sub: Subgroup, name: str | None = None) -> tuple[DenseGroup, np.ndarray]:
    """Re-index a subgroup as a standalone dense group; also return the embedding."""
    members = sub.members
    if len(members) > QUOTIENT_LIMIT:
        raise GroupError(f"subgroup of order {len(members)} too large to tabulate")
    pos = np.full(sub.parent.order, -1, dtype=np.int64)
    pos[members] = np.arange(len(members))
    prod = sub.parent.mul_vec(members[:, None], members[None, :])
    return DenseGroup(pos[prod], name=name or f"sub({sub.parent.name})", check=False), members
