"""The complete inverse system S(G) of a finite group and bounded sentences over it.

Elements are cosets gN of normal subgroups N.  An element of index [G:N]
inhabits every sort n ≥ [G:N].  Relations:

    gN ≤ hM        iff  N ⊆ M
    C(gN, hM)      iff  N ⊆ M and gM = hM
    P(aN, bN, cN)  iff  all three share N and abN = cN

Sentences are s-expressions with sorted quantifiers, ``(exists (x sort 2) F)``,
atoms ``(leq x y)``, ``(C x y)``, ``(P x y z)``, ``true`` and constants
``(const kid cid)`` naming coset ``cid`` of normal subgroup ``kid``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Union

import numpy as np

from .budget import Budget, ensure
from .formulas import FormulaError, read_sexpr
from .groups import FiniteGroup, Homomorphism, Subgroup
from .homs import is_isomorphic
from .subgroups import coset_labels, enumerate_normal_subgroups, is_normal, quotient


class SortError(FormulaError):
    pass


# -- the structure ---------------------------------------------------------------

@dataclass(eq=False)
class InverseSystem:
    group: FiniteGroup
    max_sort: int
    normals: list[Subgroup]
    labels: list[np.ndarray]            # coset label per group element, per normal
    offsets: np.ndarray                 # first element id of each normal's cosets
    kernel_of: np.ndarray               # element id -> normal id
    coset_of: np.ndarray                # element id -> coset label
    rep: np.ndarray                     # element id -> least element of the coset
    incl: np.ndarray                    # incl[i, j] iff normals[i] ⊆ normals[j]
    _domains: dict = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        return len(self.rep)

    def index_of(self, e: int) -> int:
        return self.normals[self.kernel_of[e]].index

    def element(self, kid: int, cid: int) -> int:
        if not 0 <= kid < len(self.normals):
            raise FormulaError(f"unresolved constant: no normal subgroup {kid} "
                               f"among the {len(self.normals)} of index <= {self.max_sort}")
        if not 0 <= cid < self.normals[kid].index:
            raise FormulaError(f"unresolved constant: normal subgroup {kid} has "
                               f"{self.normals[kid].index} cosets, not {cid + 1}")
        return int(self.offsets[kid] + cid)

    def name(self, e: int) -> tuple[int, int]:
        return int(self.kernel_of[e]), int(self.coset_of[e])

    def domain(self, sort: int) -> range:
        """Element ids inhabiting ``sort`` (a prefix, since normals are sorted by index)."""
        if sort < 1:
            raise SortError(f"sorts start at 1, got {sort}")
        if sort > self.max_sort:
            raise SortError(f"sort {sort} exceeds the system's max sort {self.max_sort}")
        d = self._domains.get(sort)
        if d is None:
            k = sum(1 for N in self.normals if N.index <= sort)
            d = range(int(self.offsets[k]) if k < len(self.normals) else self.size)
            self._domains[sort] = d
        return d

    def _div_in(self, kid: int, a: int, b: int) -> bool:
        """a⁻¹b ∈ normals[kid], i.e. a and b lie in one coset."""
        G = self.group
        return bool(self.normals[kid].mask[G.mul(G.inv(a), b)])

    def leq(self, e: int, f: int) -> bool:
        return bool(self.incl[self.kernel_of[e], self.kernel_of[f]])

    def C(self, e: int, f: int) -> bool:
        ke, kf = self.kernel_of[e], self.kernel_of[f]
        return bool(self.incl[ke, kf]) and self._div_in(kf, int(self.rep[e]), int(self.rep[f]))

    def P(self, e1: int, e2: int, e3: int) -> bool:
        k = self.kernel_of[e1]
        if self.kernel_of[e2] != k or self.kernel_of[e3] != k:
            return False
        G = self.group
        return self._div_in(k, G.mul(int(self.rep[e1]), int(self.rep[e2])), int(self.rep[e3]))


def build_inverse_system(G: FiniteGroup, max_sort: int,
                         budget: Budget | None = None) -> InverseSystem:
    if max_sort < 1:
        raise SortError("max_sort must be positive")
    normals = enumerate_normal_subgroups(G, max_sort, ensure(budget))
    labels = [coset_labels(G, N) for N in normals]
    counts = np.array([N.index for N in normals], dtype=np.int64)
    offsets = np.concatenate([[0], np.cumsum(counts)[:-1]]).astype(np.int64)
    kernel_of = np.repeat(np.arange(len(normals)), counts)
    coset_of = np.concatenate([np.arange(c) for c in counts]) if len(counts) else np.zeros(0, int)
    reps = []
    for lab in labels:
        _, first = np.unique(lab, return_index=True)
        reps.append(first)
    rep = np.concatenate(reps).astype(np.int64)
    masks = np.array([N.mask for N in normals], dtype=np.float32)
    # N_i ⊆ N_j iff all |N_i| members of N_i lie in N_j
    overlap = masks @ masks.T
    incl = overlap == np.array([N.order for N in normals], dtype=np.float32)[:, None]
    return InverseSystem(G, max_sort, normals, labels, offsets, kernel_of, coset_of, rep, incl)


# -- sentences -------------------------------------------------------------------

@dataclass(frozen=True)
class LConst:
    kid: int
    cid: int


LTerm = Union[str, LConst]


@dataclass(frozen=True)
class LTrue:
    pass


@dataclass(frozen=True)
class LAtom:
    rel: str            # "leq", "C" or "P"
    args: tuple


@dataclass(frozen=True)
class LNot:
    body: "LFormula"


@dataclass(frozen=True)
class LAnd:
    left: "LFormula"
    right: "LFormula"


@dataclass(frozen=True)
class LOr:
    left: "LFormula"
    right: "LFormula"


@dataclass(frozen=True)
class LImplies:
    left: "LFormula"
    right: "LFormula"


@dataclass(frozen=True)
class LExists:
    var: str
    sort: int
    body: "LFormula"


@dataclass(frozen=True)
class LForall:
    var: str
    sort: int
    body: "LFormula"


LFormula = Union[LTrue, LAtom, LNot, LAnd, LOr, LImplies, LExists, LForall]
LgSentence = LFormula

_ARITY = {"leq": 2, "C": 2, "P": 3}


def _sym(node) -> str:
    val, at = node
    if isinstance(val, list):
        raise FormulaError(f"expected a symbol at position {at}")
    return val


def _int(node) -> int:
    val = _sym(node)
    try:
        return int(val)
    except ValueError:
        raise FormulaError(f"expected an integer at position {node[1]}, got {val!r}") from None


def _lterm(node) -> LTerm:
    val, at = node
    if isinstance(val, list):
        if len(val) == 3 and _sym(val[0]) == "const":
            return LConst(_int(val[1]), _int(val[2]))
        raise FormulaError(f"bad term at position {at}")
    return val


def _lbuild(node) -> LFormula:
    val, at = node
    if not isinstance(val, list):
        if val == "true":
            return LTrue()
        raise FormulaError(f"expected a formula at position {at}")
    if not val:
        raise FormulaError(f"empty form at position {at}")
    head = _sym(val[0])
    args = val[1:]
    if head in _ARITY:
        if len(args) != _ARITY[head]:
            raise FormulaError(f"'{head}' takes {_ARITY[head]} arguments (position {at})")
        return LAtom(head, tuple(_lterm(a) for a in args))
    if head == "not" and len(args) == 1:
        return LNot(_lbuild(args[0]))
    if head in ("and", "or", "implies") and len(args) == 2:
        cls = {"and": LAnd, "or": LOr, "implies": LImplies}[head]
        return cls(_lbuild(args[0]), _lbuild(args[1]))
    if head in ("exists", "forall") and len(args) == 2:
        binder, bat = args[0]
        if not isinstance(binder, list) or len(binder) != 3 or _sym(binder[1]) != "sort":
            raise FormulaError(f"expected (var sort N) at position {bat}")
        cls = LExists if head == "exists" else LForall
        return cls(_sym(binder[0]), _int(binder[2]), _lbuild(args[1]))
    raise FormulaError(f"unknown or malformed form '{head}' at position {at}")


def parse_lg_formula(text: str) -> LFormula:
    return _lbuild(read_sexpr(text))


def parse_lg_sentence(text: str) -> LgSentence:
    f = parse_lg_formula(text)
    free = lg_free_vars(f)
    if free:
        raise FormulaError(f"unbound variable(s): {', '.join(sorted(free))}")
    return f


def _tstr(t: LTerm) -> str:
    return f"(const {t.kid} {t.cid})" if isinstance(t, LConst) else t


def lg_to_sexpr(f: LFormula) -> str:
    if isinstance(f, LTrue):
        return "true"
    if isinstance(f, LAtom):
        return f"({f.rel} {' '.join(_tstr(t) for t in f.args)})"
    if isinstance(f, LNot):
        return f"(not {lg_to_sexpr(f.body)})"
    if isinstance(f, (LAnd, LOr, LImplies)):
        head = {LAnd: "and", LOr: "or", LImplies: "implies"}[type(f)]
        return f"({head} {lg_to_sexpr(f.left)} {lg_to_sexpr(f.right)})"
    head = "exists" if isinstance(f, LExists) else "forall"
    return f"({head} ({f.var} sort {f.sort}) {lg_to_sexpr(f.body)})"


def lg_free_vars(f: LFormula) -> set[str]:
    if isinstance(f, LTrue):
        return set()
    if isinstance(f, LAtom):
        return {t for t in f.args if isinstance(t, str)}
    if isinstance(f, LNot):
        return lg_free_vars(f.body)
    if isinstance(f, (LAnd, LOr, LImplies)):
        return lg_free_vars(f.left) | lg_free_vars(f.right)
    return lg_free_vars(f.body) - {f.var}


def lg_depth(f: LFormula) -> int:
    if isinstance(f, (LTrue, LAtom)):
        return 0
    if isinstance(f, LNot):
        return lg_depth(f.body)
    if isinstance(f, (LAnd, LOr, LImplies)):
        return max(lg_depth(f.left), lg_depth(f.right))
    return 1 + lg_depth(f.body)


def max_sort_of(f: LFormula) -> int:
    if isinstance(f, (LTrue, LAtom)):
        return 0
    if isinstance(f, LNot):
        return max_sort_of(f.body)
    if isinstance(f, (LAnd, LOr, LImplies)):
        return max(max_sort_of(f.left), max_sort_of(f.right))
    return max(f.sort, max_sort_of(f.body))


def phi_nq(n: int, q: int) -> LgSentence:
    """∃N_0 … N_n : S_q  ⋀_{i≠j} ¬(N_i ≤ N_j ∧ N_j ≤ N_i)."""
    if n < 0 or q < 1:
        raise ValueError("phi_nq needs n >= 0 and q >= 1")
    names = [f"N{i}" for i in range(n + 1)]
    conj: LFormula | None = None
    for i, j in itertools.permutations(range(n + 1), 2):
        a, b = names[i], names[j]
        lit = LNot(LAnd(LAtom("leq", (a, b)), LAtom("leq", (b, a))))
        conj = lit if conj is None else LAnd(conj, lit)
    body: LFormula = conj if conj is not None else LTrue()
    for v in reversed(names):
        body = LExists(v, q, body)
    return body


# -- evaluation ------------------------------------------------------------------

def _conjuncts(f: LFormula) -> list[LFormula]:
    if isinstance(f, LAnd):
        return _conjuncts(f.left) + _conjuncts(f.right)
    return [f]


def eval_lg(S: InverseSystem, f: LFormula, env: dict[str, int] | None = None) -> bool:
    """Sorted satisfaction.  Blocks ∃x̄ (A_1 ∧ … ∧ A_k) are searched with each
    conjunct checked as soon as its variables are bound."""
    top = max_sort_of(f)
    if top > S.max_sort:
        raise SortError(f"sentence uses sort {top} but the system stops at {S.max_sort}")
    return _ev(S, f, dict(env or {}))


def _val(S: InverseSystem, t: LTerm, env: dict[str, int]) -> int:
    if isinstance(t, LConst):
        return S.element(t.kid, t.cid)
    if t not in env:
        raise FormulaError(f"unbound variable {t}")
    return env[t]


def _ev(S: InverseSystem, f: LFormula, env: dict[str, int]) -> bool:
    if isinstance(f, LTrue):
        return True
    if isinstance(f, LAtom):
        vals = [_val(S, t, env) for t in f.args]
        return getattr(S, f.rel)(*vals)
    if isinstance(f, LNot):
        return not _ev(S, f.body, env)
    if isinstance(f, LAnd):
        return _ev(S, f.left, env) and _ev(S, f.right, env)
    if isinstance(f, LOr):
        return _ev(S, f.left, env) or _ev(S, f.right, env)
    if isinstance(f, LImplies):
        return (not _ev(S, f.left, env)) or _ev(S, f.right, env)
    if isinstance(f, LForall):
        return all(_ev(S, f.body, {**env, f.var: e}) for e in S.domain(f.sort))
    # existential block
    block: list[tuple[str, int]] = []
    body: LFormula = f
    while isinstance(body, LExists):
        block.append((body.var, body.sort))
        body = body.body
    conj = _conjuncts(body)
    names = [v for v, _ in block]
    # conjunct i is checked at the deepest block position among its free variables
    # (the last binding of a repeated name wins, as in nested scopes)
    last_pos = {v: i for i, v in enumerate(names)}
    at_level: list[list[LFormula]] = [[] for _ in range(len(block) + 1)]
    for c in conj:
        fv = [last_pos[v] + 1 for v in lg_free_vars(c) if v in last_pos]
        at_level[max(fv, default=0)].append(c)
    if not all(_ev(S, c, env) for c in at_level[0]):
        return False

    def search(level: int, local: dict[str, int]) -> bool:
        if level == len(block):
            return True
        var, sort = block[level]
        for e in S.domain(sort):
            local[var] = e
            if all(_ev(S, c, local) for c in at_level[level + 1]) and search(level + 1, local):
                return True
        return False

    return search(0, dict(env))


def eval_lg_sentence(S: InverseSystem, f: LgSentence) -> bool:
    free = lg_free_vars(f)
    if free:
        raise FormulaError(f"not a sentence; free: {', '.join(sorted(free))}")
    return eval_lg(S, f)


def count_normal_up_to(S: InverseSystem, q: int) -> int:
    return sum(1 for N in S.normals if N.index <= q)


def sort_trivial_up_to(S: InverseSystem, n: int) -> bool:
    """The only elements of sort ≤ n are cosets of the whole group."""
    if n > S.max_sort:
        raise SortError(f"sort {n} exceeds max sort {S.max_sort}")
    return all(N.index == 1 for N in S.normals if N.index <= n)


# -- structural laws -------------------------------------------------------------

def check_laws(S: InverseSystem) -> dict[str, bool]:
    """Exhaustive checks of the relation laws, vectorized per normal subgroup pair.

    C and P are evaluated from membership (a⁻¹b ∈ M), independently of the
    coset labels used to name elements.
    """
    G = S.group
    table, inv = G.table(), G.inverses()
    K = len(S.normals)
    out = {}
    incl = S.incl
    diag = np.diag(incl).all()
    fi = incl.astype(np.float32)
    trans = not np.any(((fi @ fi) > 0) & ~incl)
    out["leq_preorder"] = bool(diag and trans)
    # on identity cosets ≤ is antisymmetric: distinct normals are never mutually included
    out["leq_partial_on_identity_cosets"] = bool(not np.any((incl & incl.T) & ~np.eye(K, dtype=bool)))
    top = [i for i, N in enumerate(S.normals) if N.index == 1]
    out["identity_in_sort_1"] = len(top) == 1 and S.rep[S.offsets[top[0]]] == G.identity \
        and S.index_of(int(S.offsets[top[0]])) == 1
    # C(gN, hM) for fixed g and M: count the representatives h with g⁻¹h ∈ M;
    # forward functionality means the count is 1 for every g and every M ⊇ N
    masks = np.array([M.mask for M in S.normals])
    reps = np.zeros_like(masks)
    for j, M in enumerate(S.normals):
        reps[j, S.rep[S.offsets[j]:S.offsets[j] + M.index]] = True
    counts = np.empty((G.order, K), dtype=np.int64)
    for g in range(G.order):
        shifted = masks[:, table[inv[g]]]           # shifted[j, x] = [g⁻¹x ∈ M_j]
        counts[g] = (shifted & reps).sum(axis=1)
    bad = counts != 1
    c_ok = True
    for i, N in enumerate(S.normals):
        rn = S.rep[S.offsets[i]:S.offsets[i] + N.index]
        if np.any(bad[np.ix_(rn, np.nonzero(incl[i])[0])]):
            c_ok = False
    out["C_functional"] = c_ok
    p_ok = True
    for i, N in enumerate(S.normals):
        r = S.rep[S.offsets[i]:S.offsets[i] + N.index]
        prod = table[r[:, None], r[None, :]]                        # a·b
        rel = N.mask[table[inv[prod][:, :, None], r[None, None, :]]]  # (ab)⁻¹c ∈ N
        if not np.all(rel.sum(axis=2) == 1):
            p_ok = False
            continue
        law = rel.argmax(axis=2)
        # the law must be a group isomorphic to G/N via g ↦ its coset
        lab = S.labels[i]
        if not np.array_equal(law[lab[:, None], lab[None, :]], lab[table]):
            p_ok = False
    out["P_multiplication"] = p_ok
    return out


# -- correspondence and embeddings ----------------------------------------------------

def correspondence_check(G: FiniteGroup, K: Subgroup, k: int,
                         budget: Budget | None = None) -> bool:
    """N ↦ N/K is a bijection between normals of index k over K and normals of G/K
    of index k, with G/N ≅ (G/K)/(N/K)."""
    if not is_normal(G, K):
        raise ValueError("K must be normal")
    budget = ensure(budget)
    Q, proj = quotient(G, K)
    lab = proj.image_array()
    upstairs = [N for N in enumerate_normal_subgroups(G, k, budget)
                if N.index == k and K.issubset(N)]
    downstairs = [M for M in enumerate_normal_subgroups(Q, k, budget) if M.index == k]
    images = []
    for N in upstairs:
        mask = np.zeros(Q.order, dtype=bool)
        mask[lab[N.members]] = True
        images.append(Subgroup(Q, mask))
    if len({I.key for I in images}) != len(images):
        return False
    if sorted(I.key for I in images) != sorted(M.key for M in downstairs):
        return False
    for N, I in zip(upstairs, images):
        if not is_isomorphic(quotient(G, N)[0], quotient(Q, I)[0], budget=budget):
            return False
    return True


def embed_inverse_system(pi: Homomorphism, S_Q: InverseSystem,
                         S_G: InverseSystem | None = None) -> tuple[dict[int, int], InverseSystem]:
    """ι(gN̄) = g'·π⁻¹(N̄) with π(g') = g, as element ids of S(G)."""
    if not pi.is_surjective():
        raise ValueError("embedding needs a surjective π")
    G = pi.source
    if S_G is None:
        S_G = build_inverse_system(G, S_Q.max_sort)
    img = pi.image_array()
    pre_of = np.zeros(pi.target.order, dtype=np.int64)
    pre_of[img[::-1]] = np.arange(G.order)[::-1]            # least preimage
    keys = {N.key: i for i, N in enumerate(S_G.normals)}
    mapping = {}
    for kid, Nbar in enumerate(S_Q.normals):
        pre = Subgroup(G, Nbar.mask[img])
        gid = keys.get(pre.key)
        if gid is None:
            raise ValueError("preimage of a normal subgroup missing from S(G)")
        for cid in range(Nbar.index):
            e = S_Q.element(kid, cid)
            g = int(pre_of[S_Q.rep[e]])
            mapping[e] = S_G.element(gid, int(S_G.labels[gid][g]))
    return mapping, S_G


def embedding_preserves(S_Q: InverseSystem, S_G: InverseSystem, mapping: dict[int, int]) -> bool:
    """Every ≤, C, P instance among images holds iff it held in S(Q)."""
    els = sorted(mapping)
    for a in els:
        for b in els:
            if S_Q.leq(a, b) != S_G.leq(mapping[a], mapping[b]):
                return False
            if S_Q.C(a, b) != S_G.C(mapping[a], mapping[b]):
                return False
    for a in els:
        for b in els:
            if S_Q.kernel_of[a] != S_Q.kernel_of[b]:
                continue
            for c in els:
                if S_Q.P(a, b, c) != S_G.P(mapping[a], mapping[b], mapping[c]):
                    return False
    return True


# -- elementary equivalence at bounded rank --------------------------------------------

def _atomic_type(S: InverseSystem, xs: tuple[int, ...]) -> tuple:
    """Truth values of every atom over the tuple, plus each entry's least sort."""
    sorts = tuple(S.index_of(x) for x in xs)
    rng = range(len(xs))
    leq = tuple(S.leq(xs[i], xs[j]) for i in rng for j in rng)
    cc = tuple(S.C(xs[i], xs[j]) for i in rng for j in rng)
    pp = tuple(S.P(xs[i], xs[j], xs[k]) for i in rng for j in rng for k in rng)
    return sorts, leq, cc, pp


def rank_types(S: InverseSystem, max_sort: int, rank: int) -> frozenset:
    """The rank-``rank`` type of the empty tuple (Hintikka recursion).

    Equality is not in the language, so atomic types use ≤, C, P and sort
    membership only.  Two structures have equal results iff they agree on
    every sentence of quantifier depth ≤ rank with sorts ≤ max_sort.
    """
    dom = list(S.domain(max_sort))

    def tp(xs: tuple[int, ...], r: int):
        base = _atomic_type(S, xs)
        if r == 0:
            return base
        return base, frozenset(tp(xs + (y,), r - 1) for y in dom)

    return frozenset([tp((), rank)])


def random_lg_sentence(rng: random.Random, max_sort: int, depth: int = 2,
                       size_budget: int = 4) -> LgSentence:
    names = ["x", "y", "z"]

    def atom(bound: list[str]) -> LFormula:
        if not bound:
            return LTrue()
        rel = rng.choice(["leq", "C", "P"])
        return LAtom(rel, tuple(rng.choice(bound) for _ in range(_ARITY[rel])))

    def gen(d: int, budget: int, bound: list[str]) -> LFormula:
        choices = ["atom"]
        if budget > 0:
            choices += ["not", "and", "or"]
        if d > 0:
            choices += ["exists", "forall", "exists"]
        kind = rng.choice(choices)
        if kind == "atom":
            return atom(bound)
        if kind == "not":
            return LNot(gen(d, budget - 1, bound))
        if kind in ("and", "or"):
            cls = LAnd if kind == "and" else LOr
            return cls(gen(d, budget // 2, bound), gen(d, budget // 2, bound))
        var = names[len(bound) % len(names)]
        cls = LExists if kind == "exists" else LForall
        return cls(var, rng.randint(1, max_sort), gen(d - 1, budget, bound + [var]))

    return gen(depth, size_budget, [])


def transfer_check(G: FiniteGroup, pi: Homomorphism, n: int, rank: int = 2,
                   corpus: Iterable[LgSentence] = ()) -> dict:
    """Compare S(G) and S(Q) on sentences with sorts ≤ n.

    Returns whether every normal of index ≤ n contains ker π, whether the
    rank-``rank`` types agree, and how many corpus sentences agree.
    """
    Q = pi.target
    SG = build_inverse_system(G, n)
    SQ = build_inverse_system(Q, n)
    ker = pi.kernel()
    hyp = all(ker.issubset(N) for N in SG.normals)
    types_agree = rank_types(SG, n, rank) == rank_types(SQ, n, rank)
    agree = total = 0
    for f in corpus:
        total += 1
        agree += eval_lg_sentence(SG, f) == eval_lg_sentence(SQ, f)
    return {"hypothesis": hyp, "types_agree": types_agree, "agree": agree, "total": total}
