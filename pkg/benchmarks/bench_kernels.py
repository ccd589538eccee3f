"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each kernel runs on the same inputs under both backends; outputs are
compared before timings are reported.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from galgraph import kernels
from galgraph.catalogue import small_group
from galgraph.codec import choose_parameters
from galgraph.groups import CyclicGroup, DirectProduct
from galgraph.subgroups import class_representatives, normal_closure


def _cases(quick: bool):
    P = choose_parameters(2)
    W = P.W
    Wt = W.table().astype(np.int32)
    Winv = W.inverses().astype(np.int32)
    gens = np.arange(1, 6, dtype=np.int32)
    members = np.nonzero(P.lam.kernel().mask)[0].astype(np.int32)
    D = P.D
    Dt = D.table().astype(np.int32)
    # a power of C2 has a large normal lattice and stresses normal_joins
    E = CyclicGroup(2)
    for _ in range(4 if quick else 6):
        E = DirectProduct(E, CyclicGroup(2))
    Et = E.table().astype(np.int32)
    atoms = np.array([normal_closure(E, [x]).mask for x in class_representatives(E)
                      if x != E.identity], dtype=np.uint8)
    S = small_group(64, 138)
    St = S.table().astype(np.int32)
    Sinv = S.inverses().astype(np.int32)
    sub = normal_closure(S, [int(class_representatives(S)[-1])])
    smem = np.nonzero(sub.mask)[0].astype(np.int32)

    yield "closure(W, gens)", lambda m: m.closure(Wt, gens, W.identity)
    yield "element_orders(W)", lambda m: m.element_orders(Wt, W.identity)
    yield "coset_labels(W, ker lam)", lambda m: m.coset_labels(Wt, members)
    yield "conjugacy_labels(W)", lambda m: m.conjugacy_labels(Wt, Winv)
    yield "coset_labels(SG(64,138))", lambda m: m.coset_labels(St, smem)
    yield "conjugacy_labels(SG(64,138))", lambda m: m.conjugacy_labels(St, Sinv)
    dgens = np.array([1, 2], dtype=np.int32)
    yield "extend_hom(D -> D, id)", lambda m: m.extend_hom(Dt, Dt, dgens, dgens, D.identity,
                                                           D.identity)
    yield f"normal_joins(C2^{E.order.bit_length() - 1})", \
        lambda m: m.normal_joins(Et, atoms, E.identity, 1 << 30)


def _same(a, b) -> bool:
    if a is None or b is None:
        return a is b
    return np.array_equal(np.asarray(a), np.asarray(b))


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    args = ap.parse_args(argv)

    if "cython" not in kernels.available_backends():
        print("compiled kernels are not built; nothing to compare")
        return 1
    cy, py = kernels.module("cython"), kernels.module("python")
    print(f"{'kernel':32s} {'cython s':>10s} {'python s':>10s} {'speedup':>8s}")
    ok = True
    for name, run in _cases(args.quick):
        if not _same(run(cy), run(py)):
            print(f"{name:32s} OUTPUT MISMATCH")
            ok = False
            continue
        tc = _time(lambda: run(cy), args.repeat)
        tp = _time(lambda: run(py), args.repeat)
        print(f"{name:32s} {tc:10.4f} {tp:10.4f} {tp / max(tc, 1e-9):7.1f}x")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
