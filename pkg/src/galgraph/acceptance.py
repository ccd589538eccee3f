"""The acceptance suite: thirteen exact checks, each with a time limit.

Each check returns a :class:`CriterionResult`; running past the limit or
exhausting a budget is a failure, never a pass.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

from .budget import Budget, BudgetExceeded

SEED = 20240601


@dataclass
class CriterionResult:
    number: int
    title: str
    ok: bool
    detail: str
    seconds: float
    limit: float

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return (f"[{status}] {self.number:2d}. {self.title}: {self.detail} "
                f"({self.seconds:.1f}s / limit {self.limit:.0f}s)")


# -- individual criteria ----------------------------------------------------------

def c01_parameters() -> tuple[bool, str]:
    from .codec import choose_parameters

    P = choose_parameters(2)
    got = (P.s, P.r, P.t, P.p_r, P.D.order, P.U.order, P.W.order)
    want = (3, 7, 13, 3, 21, 13, 5733)
    return got == want, f"(s,r,t,p_r,|D|,|U|,|W|) = {got}"


def c02_identities() -> tuple[bool, str]:
    from .codec import choose_parameters, geometric_sum_check, relation_identity_check

    res = {}
    for ph in (2, 3):
        P = choose_parameters(ph)
        res[ph] = (relation_identity_check(P), geometric_sum_check(P))
    ok = all(a and b for a, b in res.values())
    return ok, ", ".join(f"p̂={k}: relation {a}, sum {b}" for k, (a, b) in res.items())


def c03_conditions() -> tuple[bool, str]:
    from .codec import choose_parameters
    from .conditions import verify_graph_conditions

    rep = verify_graph_conditions(choose_parameters(2), g2_index_bound=2)
    return rep.all_pass, "; ".join(f"{k} {v.status}" for k, v in rep.verdicts.items())


def c04_roundtrip() -> tuple[bool, str]:
    from .codec import choose_parameters, decode_graph, encode_graph
    from .graphs import all_graphs, are_isomorphic

    P = choose_parameters(2)
    small = [g for n in (1, 2) for g in all_graphs(n)]
    three = all_graphs(3)
    parts = []
    ok = True
    for g, method, secs in [(g, "exhaustive", None) for g in small] + \
                           [(g, "targeted", 600.0) for g in three]:
        t0 = time.monotonic()
        try:
            h = decode_graph(encode_graph(g, P), P, Budget(max_seconds=secs), method=method)
            good = are_isomorphic(g, h)
        except BudgetExceeded:
            good = False
        ok &= good
        parts.append(f"{len(g)}v{len(g.edges)}e:{'ok' if good else 'FAIL'}"
                     f"({time.monotonic() - t0:.0f}s)")
    return ok, f"{len(small)} classes on <=2 vertices, {len(three)} on 3: " + " ".join(parts)


def c05_split() -> tuple[bool, str]:
    from .codec import choose_parameters, encode_graph, split_check
    from .graphs import all_graphs

    P = choose_parameters(2)
    parts = []
    ok = True
    for n in (1, 2):
        for g in all_graphs(n):
            enc = encode_graph(g, P)
            good = split_check(enc) and enc.nsize == P.U.order ** len(g.edges)
            ok &= good
            parts.append(f"{n}v{len(g.edges)}e:{good}")
    return ok, " ".join(parts)


def c06_structural() -> tuple[bool, str]:
    from .codec import choose_parameters, decode_graph
    from .graphs import Graph, are_isomorphic

    P = choose_parameters(2)
    cases = [
        ("D", P.D, Graph.build(["a"])),
        ("W", P.W, Graph.build(["a", "b"], [("a", "b")])),
        ("DxD", P.DxD, Graph.build(["a", "b"])),
    ]
    parts, ok = [], True
    for name, G, want in cases:
        good = are_isomorphic(decode_graph(G, P), want)
        ok &= good
        parts.append(f"{name}:{good}")
    return ok, " ".join(parts)


def interpretation_corpus(seed: int = SEED, per_graph: int = 8):
    """Seeded (graph, sentence) pairs on every graph with at most 3 vertices."""
    from .formulas import random_sentence
    from .graphs import all_graphs

    rng = random.Random(seed)
    out = []
    for n in (1, 2, 3):
        for g in all_graphs(n):
            for _ in range(per_graph):
                out.append((g, random_sentence(rng, depth=2)))
    return out


def c07_interpretation() -> tuple[bool, str]:
    from .codec import choose_parameters, decode_graph_full, encode_graph
    from .transpiler import check_interpretation

    P = choose_parameters(2)
    corpus = interpretation_corpus()
    decoded = {}
    agree = 0
    for g, f in corpus:
        if g not in decoded:
            decoded[g] = decode_graph_full(encode_graph(g, P), P)
        agree += check_interpretation(g, f, P, decoded=decoded[g])
    return agree == len(corpus) and len(corpus) >= 50, \
        f"{agree}/{len(corpus)} sentence/graph pairs agree (seed {SEED})"


def c08_inverse_laws() -> tuple[bool, str]:
    from .catalogue import iter_small_groups
    from .groups import CyclicGroup, DirectProduct
    from .inverse_system import (
        build_inverse_system,
        check_laws,
        count_normal_up_to,
        eval_lg_sentence,
        phi_nq,
    )

    bad = []
    groups = 0
    for G in iter_small_groups(100):
        groups += 1
        S = build_inverse_system(G, G.order)
        laws = check_laws(S)
        if not all(laws.values()):
            bad.append(f"{G.name}: {[k for k, v in laws.items() if not v]}")
        for q in range(1, min(4, G.order) + 1):
            c = count_normal_up_to(S, q)
            for n in range(0, 5):
                if eval_lg_sentence(S, phi_nq(n, q)) != (c >= n + 1):
                    bad.append(f"{G.name}: phi({n},{q})")
    C2 = CyclicGroup(2)
    S2 = build_inverse_system(C2, 2)
    S4 = build_inverse_system(DirectProduct(C2, C2), 2)
    named = [eval_lg_sentence(S2, phi_nq(1, 2)), not eval_lg_sentence(S2, phi_nq(2, 2)),
             eval_lg_sentence(S4, phi_nq(3, 2)), not eval_lg_sentence(S4, phi_nq(4, 2))]
    ok = not bad and all(named)
    detail = f"{groups} groups, {len(bad)} violations; named phi checks {named}"
    if bad:
        detail += f"; first: {bad[0]}"
    return ok, detail


def transfer_instances(seed: int = SEED, extra: int = 5):
    """(G, π, n): C13×C2 ↠ C2 at n = 2 plus seeded Q × C_p ↠ Q with p ∤ |Q|, p > n."""
    from .catalogue import iter_small_groups
    from .groups import CyclicGroup, DirectProduct, Homomorphism

    def proj(Q, p):
        G = DirectProduct(Q, CyclicGroup(p))
        return G, Homomorphism.from_function(G, Q, lambda x: G.unpack(x)[0])

    C13x2 = DirectProduct(CyclicGroup(13), CyclicGroup(2))
    out = [(C13x2, Homomorphism.from_function(C13x2, CyclicGroup(2), lambda x: C13x2.unpack(x)[1]), 2)]
    rng = random.Random(seed)
    pool = [Q for Q in iter_small_groups(12) if Q.order > 1]
    while len(out) < 1 + extra:
        Q = rng.choice(pool)
        p = rng.choice([5, 7, 11, 13])
        if Q.order % p == 0:
            continue
        n = rng.randint(2, 4)
        out.append((*proj(Q, p), n))
    return out


def c09_transfer() -> tuple[bool, str]:
    from .inverse_system import random_lg_sentence, transfer_check

    rng = random.Random(SEED)
    parts, ok = [], True
    for G, pi, n in transfer_instances():
        corpus = [random_lg_sentence(rng, n, depth=2) for _ in range(40)]
        r = transfer_check(G, pi, n, rank=2, corpus=corpus)
        good = r["hypothesis"] and r["types_agree"] and r["agree"] == r["total"]
        ok &= good
        parts.append(f"{G.name}->{pi.target.name} n={n}: types {r['types_agree']}, "
                     f"corpus {r['agree']}/{r['total']}")
    return ok, "; ".join(parts)


def c10_obstruction() -> tuple[bool, str]:
    from .catalogue import iter_small_groups
    from .codec import choose_parameters, p_obstruction_check

    P = choose_parameters(2)
    hs = [H for H in iter_small_groups(16) if H.order in (1, 2, 4, 8, 16)]
    results = [p_obstruction_check(H, P) for H in hs]
    return all(results), f"{sum(results)}/{len(hs)} 2-groups of order <= 16 map trivially to D and W"


def c11_as_graphs() -> tuple[bool, str]:
    from .artin_schreier import build_F, graph_of_AS
    from .codec import choose_parameters, decode_graph
    from .graphs import are_isomorphic

    P = choose_parameters(2)
    cases = [("D", P.D, 1), ("D", P.D, 2), ("DxD", P.DxD, 1), ("DxD", P.DxD, 2), ("W", P.W, 1)]
    parts, ok = [], True
    for name, G, x in cases:
        try:
            good = are_isomorphic(graph_of_AS(build_F(x, G), x, P), decode_graph(G, P))
        except BudgetExceeded:
            good = False
        ok &= good
        parts.append(f"{name},|X|={x}:{good}")
    return ok, " ".join(parts)


def c12_pro_c() -> tuple[bool, str]:
    from .artin_schreier import proC_universal_check
    from .catalogue import iter_small_groups

    bad, count = [], 0
    for G in iter_small_groups(200):
        count += 1
        for primes in ((2,), (2, 3)):
            r = proC_universal_check(G, primes)
            if not all(r.values()):
                bad.append(f"{G.name} P={primes}: {r}")
    detail = f"{count} groups x 2 prime sets, {len(bad)} violations"
    if bad:
        detail += f"; first: {bad[0]}"
    return not bad, detail


def parameter_corpus(seed: int = SEED, count: int = 20):
    """Seeded (graph, formula-with-constants) pairs."""
    from .formulas import Const, random_formula, substitute_vars_with_consts
    from .graphs import Graph

    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(1, 4)
        names = [f"v{i}" for i in range(n)]
        pairs = [(a, b) for i, a in enumerate(names) for b in names[i + 1:]]
        g = Graph.build(names, [p for p in pairs if rng.random() < 0.5])
        f = random_formula(rng, 2, ("x", "y"), size_budget=4)
        f = substitute_vars_with_consts(f, {"x": Const("c1"), "y": Const("c2")})
        out.append((g, f))
    return out


def c13_parameters_law() -> tuple[bool, str]:
    from .formulas import constant_expansions_hold, eliminate_parameters, eval_graph

    corpus = parameter_corpus()
    agree = 0
    for g, f in corpus:
        closed = eliminate_parameters(f)
        agree += eval_graph(g, closed) == constant_expansions_hold(g, f)
    return agree == len(corpus), f"{agree}/{len(corpus)} structures agree"


CRITERIA: list[tuple[int, str, float, Callable[[], tuple[bool, str]]]] = [
    (1, "parameter synthesis", 1.0, c01_parameters),
    (2, "construction identities", 10.0, c02_identities),
    (3, "graph conditions G1-G4", 600.0, c03_conditions),
    (4, "encode/decode round trip", 600.0 * 5, c04_roundtrip),
    (5, "split exact sequence", 60.0, c05_split),
    (6, "structural decode oracles", 600.0, c06_structural),
    (7, "interpretation condition", 900.0, c07_interpretation),
    (8, "inverse-system laws", 300.0, c08_inverse_laws),
    (9, "finite transfer", 600.0, c09_transfer),
    (10, "order obstruction", 60.0, c10_obstruction),
    (11, "Artin-Schreier graphs", 1800.0, c11_as_graphs),
    (12, "maximal pro-C quotients", 300.0, c12_pro_c),
    (13, "parameter elimination", 60.0, c13_parameters_law),
]


def run_criterion(number: int) -> CriterionResult:
    for num, title, limit, fn in CRITERIA:
        if num == number:
            t0 = time.monotonic()
            try:
                ok, detail = fn()
            except BudgetExceeded as exc:
                ok, detail = False, f"INCONCLUSIVE: {exc}"
            secs = time.monotonic() - t0
            if ok and secs > limit:
                ok, detail = False, detail + f"; exceeded the {limit:.0f}s limit"
            return CriterionResult(num, title, ok, detail, secs, limit)
    raise ValueError(f"no criterion {number}")


def run_all(numbers=None, echo: Callable[[str], None] | None = None) -> list[CriterionResult]:
    out = []
    for num, *_ in CRITERIA:
        if numbers is not None and num not in numbers:
            continue
        r = run_criterion(num)
        if echo:
            echo(r.line())
        out.append(r)
    return out
