# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops over dense Cayley tables.

Every function here has a pure-numpy twin in ``_pykernels`` with the same
signature and the same return values; ``galgraph.kernels`` picks one.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int32_t idx_t


def closure(const idx_t[:, ::1] table, const idx_t[::1] gens, int identity):
    """Mask of the subgroup generated by ``gens``."""
    cdef Py_ssize_t n = table.shape[0]
    cdef Py_ssize_t k = gens.shape[0]
    mask_arr = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] mask = mask_arr
    queue_arr = np.empty(n, dtype=np.int32)
    cdef idx_t[::1] queue = queue_arr
    cdef Py_ssize_t head = 0, tail = 0, j
    cdef idx_t e, p
    mask[identity] = 1
    queue[tail] = identity
    tail += 1
    while head < tail:
        e = queue[head]
        head += 1
        for j in range(k):
            p = table[e, gens[j]]
            if not mask[p]:
                mask[p] = 1
                queue[tail] = p
                tail += 1
    return mask_arr


def extend_hom(const idx_t[:, ::1] src, const idx_t[:, ::1] dst,
               const idx_t[::1] gens, const idx_t[::1] images,
               int src_identity, int dst_identity):
    """Image array of the homomorphism ⟨gens⟩ -> dst fixed by ``images``.

    Entries outside ⟨gens⟩ are -1.  Returns None when the assignment does not
    extend to a homomorphism.
    """
    cdef Py_ssize_t n = src.shape[0]
    cdef Py_ssize_t k = gens.shape[0]
    img_arr = np.full(n, -1, dtype=np.int32)
    cdef idx_t[::1] img = img_arr
    queue_arr = np.empty(n, dtype=np.int32)
    cdef idx_t[::1] queue = queue_arr
    cdef Py_ssize_t head = 0, tail = 0, j
    cdef idx_t e, p, v
    img[src_identity] = dst_identity
    queue[tail] = src_identity
    tail += 1
    while head < tail:
        e = queue[head]
        head += 1
        for j in range(k):
            p = src[e, gens[j]]
            v = dst[img[e], images[j]]
            if img[p] < 0:
                img[p] = v
                queue[tail] = p
                tail += 1
            elif img[p] != v:
                return None
    return img_arr


def check_relators(const idx_t[:, ::1] table, const idx_t[::1] inv,
                   const idx_t[::1] images, const idx_t[::1] rel_gen,
                   const idx_t[::1] rel_exp, const idx_t[::1] rel_start,
                   int identity):
    """True iff every relator word evaluates to the identity.

    Relator ``r`` occupies ``rel_gen[rel_start[r]:rel_start[r+1]]``.
    """
    cdef Py_ssize_t nrel = rel_start.shape[0] - 1
    cdef Py_ssize_t r, pos, step
    cdef idx_t acc, x, e
    for r in range(nrel):
        acc = identity
        for pos in range(rel_start[r], rel_start[r + 1]):
            x = images[rel_gen[pos]]
            e = rel_exp[pos]
            if e < 0:
                x = inv[x]
                e = -e
            for step in range(e):
                acc = table[acc, x]
        if acc != identity:
            return False
    return True


def element_orders(const idx_t[:, ::1] table, int identity):
    # one walk of <g> also settles every power: |g^j| = |g| / gcd(j, |g|)
    cdef Py_ssize_t n = table.shape[0]
    out_arr = np.zeros(n, dtype=np.int32)
    cdef idx_t[::1] out = out_arr
    buf_arr = np.zeros(n + 1, dtype=np.int32)
    cdef idx_t[::1] buf = buf_arr
    cdef Py_ssize_t g, j
    cdef idx_t acc, k, a, b
    for g in range(n):
        if out[g]:
            continue
        acc = g
        k = 1
        buf[1] = g
        while acc != identity:
            acc = table[acc, g]
            k += 1
            buf[k] = acc
        for j in range(1, k + 1):
            if not out[buf[j]]:
                a, b = <idx_t>j, k
                while b:
                    a, b = b, a % b
                out[buf[j]] = k // a
    return out_arr


def coset_labels(const idx_t[:, ::1] table, const idx_t[::1] members):
    """Label each element by its left coset gN; labels follow the least element."""
    cdef Py_ssize_t n = table.shape[0]
    cdef Py_ssize_t m = members.shape[0]
    lab_arr = np.full(n, -1, dtype=np.int32)
    cdef idx_t[::1] lab = lab_arr
    cdef Py_ssize_t g, j
    cdef idx_t c = 0
    for g in range(n):
        if lab[g] >= 0:
            continue
        for j in range(m):
            lab[table[g, members[j]]] = c
        c += 1
    return lab_arr


def conjugacy_labels(const idx_t[:, ::1] table, const idx_t[::1] inv):
    """Label each element by its conjugacy class, classes numbered by least element."""
    cdef Py_ssize_t n = table.shape[0]
    lab_arr = np.full(n, -1, dtype=np.int32)
    cdef idx_t[::1] lab = lab_arr
    cdef Py_ssize_t x, g
    cdef idx_t c = 0
    for x in range(n):
        if lab[x] >= 0:
            continue
        for g in range(n):
            lab[table[table[g, x], inv[g]]] = c
        c += 1
    return lab_arr


def normal_joins(const idx_t[:, ::1] table, const cnp.uint8_t[:, ::1] atoms, int identity,
                 Py_ssize_t limit):
    """Every product of a subset of the normal subgroups ``atoms`` (rows are masks).

    Products of normal subgroups are subgroups, so N·C is the join.  The
    trivial subgroup comes first; the rest appear in discovery order.  Returns
    None once more than ``limit`` subgroups have been found.
    """
    cdef Py_ssize_t n = table.shape[0]
    cdef Py_ssize_t k = atoms.shape[0]
    cdef Py_ssize_t cap = 64, count = 1, q = 0, a, i, j, nm, cm
    out_arr = np.zeros((cap, n), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] out = out_arr
    buf_arr = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] buf = buf_arr
    nmem_arr = np.empty(n, dtype=np.int32)
    cdef idx_t[::1] nmem = nmem_arr
    amem_arr = np.empty((k, n), dtype=np.int32)
    cdef idx_t[:, ::1] amem = amem_arr
    asize_arr = np.zeros(k, dtype=np.int64)
    cdef cnp.int64_t[::1] asize = asize_arr
    cdef bint inside
    for a in range(k):
        for i in range(n):
            if atoms[a, i]:
                amem[a, asize[a]] = i
                asize[a] += 1
    out[0, identity] = 1
    seen = {bytes(out_arr[0]): 0}
    while q < count:
        nm = 0
        for i in range(n):
            if out[q, i]:
                nmem[nm] = i
                nm += 1
        for a in range(k):
            inside = True
            for j in range(asize[a]):
                if not out[q, amem[a, j]]:
                    inside = False
                    break
            if inside:
                continue
            buf[:] = 0
            cm = asize[a]
            for i in range(nm):
                for j in range(cm):
                    buf[table[nmem[i], amem[a, j]]] = 1
            key = bytes(buf_arr)
            if key in seen:
                continue
            if count >= limit:
                return None
            if count == cap:
                cap *= 2
                grown = np.zeros((cap, n), dtype=np.uint8)
                grown[:count] = out_arr[:count]
                out_arr = grown
                out = out_arr
            out[count, :] = buf
            seen[key] = count
            count += 1
        q += 1
    return out_arr[:count].copy()
