"""Every group of order at most 200, one per isomorphism class.

The data file lists permutation generators per group (exported once from the
SmallGroups library by ``tools/export_smallgroups.g``).  Groups are rebuilt
here as dense Cayley tables; nothing at runtime depends on GAP.
"""

from __future__ import annotations

import gzip
from functools import lru_cache
from importlib import resources
from typing import Iterator

import numpy as np

from .groups import DenseGroup

MAX_ORDER = 200

# hash weights for permutation rows; element keys are checked to be distinct
_WEIGHTS = np.random.default_rng(20240517).integers(1, 1 << 62, size=256, dtype=np.int64)


@lru_cache(maxsize=1)
def _entries() -> dict[tuple[int, int], tuple[int, tuple[tuple[int, ...], ...]]]:
    raw = resources.files("galgraph").joinpath("data/smallgroups.txt.gz").read_bytes()
    out = {}
    for line in gzip.decompress(raw).decode().splitlines():
        parts = line.split()
        if not parts:
            continue
        n, i, deg = int(parts[0]), int(parts[1]), int(parts[2])
        gens = tuple(tuple(int(v) - 1 for v in p.split(",")) for p in parts[3:])
        out[(n, i)] = (deg, gens)
    return out


def count(n: int) -> int:
    """Number of isomorphism classes of groups of order n in the catalogue."""
    _check_order(n)
    return sum(1 for (m, _) in _entries() if m == n)


def _check_order(n: int) -> None:
    if not 1 <= n <= MAX_ORDER:
        raise ValueError(f"catalogue covers orders 1..{MAX_ORDER}, not {n}")


def _keys(rows: np.ndarray) -> np.ndarray:
    return rows @ _WEIGHTS[: rows.shape[-1]]


def permutation_group_table(deg: int, gens) -> np.ndarray:
    """Cayley table of ⟨gens⟩ ≤ Sym(deg), identity first, BFS order.

    The product a·b applies a first, then b.
    """
    ident = np.arange(deg, dtype=np.int64)
    gens = [np.asarray(g, dtype=np.int64) for g in gens]
    elems = [ident]
    seen = {ident.tobytes()}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                p = g[a]
                key = p.tobytes()
                if key not in seen:
                    seen.add(key)
                    elems.append(p)
                    nxt.append(p)
        frontier = nxt
    E = np.array(elems, dtype=np.int64)
    keys = _keys(E)
    order = np.argsort(keys)
    sk = keys[order]
    if np.any(sk[1:] == sk[:-1]):
        raise RuntimeError("hash collision among permutation keys")
    # prod[a, b, x] = b(a(x))
    prod = E[:, E].swapaxes(0, 1)
    pk = _keys(prod)
    table = order[np.searchsorted(sk, pk)]
    return table.astype(np.int32)


@lru_cache(maxsize=512)
def small_group(n: int, i: int) -> DenseGroup:
    _check_order(n)
    try:
        deg, gens = _entries()[(n, i)]
    except KeyError:
        raise ValueError(f"no group ({n}, {i}) in the catalogue") from None
    table = permutation_group_table(deg, gens)
    if table.shape[0] != n:
        raise RuntimeError(f"catalogue entry ({n}, {i}) generates order {table.shape[0]}")
    return DenseGroup(table, name=f"SmallGroup({n},{i})")


def iter_small_groups(max_order: int = MAX_ORDER, min_order: int = 1) -> Iterator[DenseGroup]:
    _check_order(max_order)
    for (n, i) in sorted(_entries()):
        if min_order <= n <= max_order:
            yield small_group_uncached(n, i)


def small_group_uncached(n: int, i: int) -> DenseGroup:
    return small_group.__wrapped__(n, i)
