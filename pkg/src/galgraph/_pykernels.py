"""Pure numpy versions of the compiled kernels in ``_speedups.pyx``."""

from __future__ import annotations

import numpy as np


def closure(table: np.ndarray, gens: np.ndarray, identity: int) -> np.ndarray:
    n = table.shape[0]
    mask = np.zeros(n, dtype=np.uint8)
    mask[identity] = 1
    frontier = np.array([identity], dtype=np.int32)
    gens = np.asarray(gens, dtype=np.int32)
    if gens.size == 0:
        return mask
    while frontier.size:
        nxt = np.unique(table[frontier][:, gens].ravel())
        nxt = nxt[mask[nxt] == 0]
        mask[nxt] = 1
        frontier = nxt
    return mask


def extend_hom(src: np.ndarray, dst: np.ndarray, gens: np.ndarray, images: np.ndarray,
               src_identity: int, dst_identity: int):
    n = src.shape[0]
    img = np.full(n, -1, dtype=np.int32)
    img[src_identity] = dst_identity
    frontier = np.array([src_identity], dtype=np.int32)
    while frontier.size:
        fresh = []
        for g, h in zip(gens, images):
            nxt = src[frontier, g]
            val = dst[img[frontier], h]
            known = img[nxt] >= 0
            if np.any(img[nxt[known]] != val[known]):
                return None
            new, vnew = nxt[~known], val[~known]
            img[new] = vnew
            # duplicates inside one layer must agree too
            if np.any(img[new] != vnew):
                return None
            fresh.append(new)
        frontier = np.unique(np.concatenate(fresh)) if fresh else frontier[:0]
    return img


def check_relators(table, inv, images, rel_gen, rel_exp, rel_start, identity) -> bool:
    for r in range(len(rel_start) - 1):
        acc = identity
        for pos in range(rel_start[r], rel_start[r + 1]):
            x = images[rel_gen[pos]]
            e = int(rel_exp[pos])
            if e < 0:
                x, e = inv[x], -e
            for _ in range(e):
                acc = table[acc, x]
        if acc != identity:
            return False
    return True


def element_orders(table: np.ndarray, identity: int) -> np.ndarray:
    n = table.shape[0]
    out = np.zeros(n, dtype=np.int32)
    cur = np.arange(n, dtype=np.int32)
    base = np.arange(n, dtype=np.int32)
    k = 1
    pending = np.ones(n, dtype=bool)
    while pending.any():
        hit = pending & (cur == identity)
        out[hit] = k
        pending &= ~hit
        cur = table[cur, base]
        k += 1
    return out


def coset_labels(table: np.ndarray, members: np.ndarray) -> np.ndarray:
    n = table.shape[0]
    lab = np.full(n, -1, dtype=np.int32)
    c = 0
    for g in range(n):
        if lab[g] < 0:
            lab[table[g, members]] = c
            c += 1
    return lab


def conjugacy_labels(table: np.ndarray, inv: np.ndarray) -> np.ndarray:
    n = table.shape[0]
    lab = np.full(n, -1, dtype=np.int32)
    rows = np.arange(n)
    c = 0
    for x in range(n):
        if lab[x] < 0:
            lab[table[table[rows, x], inv]] = c
            c += 1
    return lab


def normal_joins(table: np.ndarray, atoms: np.ndarray, identity: int, limit: int):
    n = table.shape[0]
    first = np.zeros(n, dtype=np.uint8)
    first[identity] = 1
    out = [first]
    seen = {first.tobytes(): 0}
    members = [np.nonzero(a)[0] for a in atoms]
    q = 0
    while q < len(out):
        cur = out[q]
        nmem = np.nonzero(cur)[0]
        for cm in members:
            if cur[cm].all():
                continue
            buf = np.zeros(n, dtype=np.uint8)
            buf[table[np.ix_(nmem, cm)].ravel()] = 1
            key = buf.tobytes()
            if key not in seen:
                if len(out) >= limit:
                    return None
                seen[key] = len(out)
                out.append(buf)
        q += 1
    return np.array(out, dtype=np.uint8)
