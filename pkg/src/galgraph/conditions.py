"""The four graph conditions on (D, U, W) and a verdict report."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .budget import Budget, BudgetExceeded, ensure
from .groups import DirectProduct, FiniteGroup, Homomorphism, Subgroup, as_group
from .homs import epimorphisms, iter_homomorphisms, kernels_of_epimorphisms
from .subgroups import (
    composition_factors,
    conjugate_set,
    frattini,
    frattini_trivial_certificate,
    is_maximal,
    maximal_subgroups,
    normal_lattice,
)

PASS, FAIL, INCONCLUSIVE, SKIPPED = "PASS", "FAIL", "INCONCLUSIVE", "SKIPPED"


@dataclass
class Verdict:
    status: str
    detail: str = ""


@dataclass
class ConditionReport:
    verdicts: dict[str, Verdict] = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return bool(self.verdicts) and all(v.status == PASS for v in self.verdicts.values())

    def lines(self) -> list[str]:
        return [f"{name} {v.status} {v.detail}".rstrip() for name, v in self.verdicts.items()]


def _guard(fn, *args, **kw) -> Verdict:
    try:
        return fn(*args, **kw)
    except BudgetExceeded as exc:
        return Verdict(INCONCLUSIVE, str(exc))


def power_group(D: FiniteGroup, n: int) -> FiniteGroup:
    G = D
    for _ in range(n - 1):
        G = DirectProduct(D, G)
    return G


def coordinate_projection(D: FiniteGroup, P: FiniteGroup, n: int, i: int) -> Homomorphism:
    """π_i: D^n -> D for the right-nested power ``P`` built by power_group."""
    scale = D.order ** (n - 1 - i)
    return Homomorphism.from_function(P, D, lambda x: (x // scale) % D.order)


# -- (G1) -------------------------------------------------------------------

def check_g1(D: FiniteGroup, U: FiniteGroup) -> Verdict:
    fd, fu = composition_factors(D), composition_factors(U)
    shared = sorted(set(map(str, fd)) & set(map(str, fu)))
    if shared:
        return Verdict(FAIL, f"shared factors {shared}; D: {fd}, U: {fu}")
    return Verdict(PASS, f"D: {fd}, U: {fu}")


# -- (G2) -------------------------------------------------------------------

def check_g2(D: FiniteGroup, bound: int, budget: Budget | None = None) -> Verdict:
    if bound < 1:
        return Verdict(SKIPPED, "bound 0: nothing checked")
    budget = ensure(budget)
    total = 0
    for n in range(1, bound + 1):
        P = power_group(D, n)
        coords = [coordinate_projection(D, P, n, i).kernel() for i in range(n)]
        for K in kernels_of_epimorphisms(P, D, budget):
            total += 1
            if not any(K == C for C in coords):
                return Verdict(FAIL, f"|I|={n}: kernel of order {K.order} is no coordinate kernel")
    return Verdict(PASS, f"|I| <= {bound}: {total} epimorphism kernels, all coordinate kernels")


# -- (G3) -------------------------------------------------------------------

def w_frattini_witnesses(D: FiniteGroup, W: FiniteGroup, lam: Homomorphism,
                         theta: Homomorphism) -> list[Subgroup]:
    """Maximal-subgroup candidates of W whose intersection should be trivial.

    The U-conjugates of θ(D×D) meet in the kernel of the action on U; the
    preimages λ^-1(M×D), λ^-1(D×M) for maximal M ≤ D meet in λ^-1(Φ(D)²).
    """
    DxD = lam.target
    limg = lam.image_array()
    comp = Subgroup.generated(W, theta.images)
    U = Subgroup(W, limg == DxD.identity)
    out = {}
    for u in U.members:
        mask = np.zeros(W.order, dtype=bool)
        mask[conjugate_set(W, int(u), comp.members)] = True
        C = Subgroup(W, mask)
        out[C.key] = C
    dd = np.arange(DxD.order)
    first, second = np.divmod(dd, D.order)
    for M in maximal_subgroups(D):
        for coord in (first, second):
            keep = M.mask[coord]
            pre = Subgroup(W, keep[limg])
            out[pre.key] = pre
    return sorted(out.values(), key=Subgroup.sort_key)


def check_g3(D: FiniteGroup, W: FiniteGroup, lam: Homomorphism, theta: Homomorphism,
             budget: Budget | None = None) -> Verdict:
    phi_d = frattini(D, budget)
    if phi_d.order != 1:
        return Verdict(FAIL, f"Φ(D) has order {phi_d.order}")
    if W.order <= 500:
        phi_w = frattini(W, budget)
        if phi_w.order != 1:
            return Verdict(FAIL, f"Φ(W) has order {phi_w.order}")
        return Verdict(PASS, "Φ(D) = 1 and Φ(W) = 1 (exact)")
    witnesses = w_frattini_witnesses(D, W, lam, theta)
    cert = frattini_trivial_certificate(W, witnesses)
    if not cert:
        return Verdict(INCONCLUSIVE, f"Φ(D) = 1 exact; certificate for W failed: {cert.reason}")
    return Verdict(PASS, f"Φ(D) = 1 (exact); Φ(W) = 1 ({cert.reason})")


def small_subgroup_maximality(D: FiniteGroup, elements: list[int]) -> dict[int, bool]:
    """Maximality of ⟨x⟩ in D for each x."""
    return {x: is_maximal(D, Subgroup.generated(D, [x]))[0] for x in elements}


# -- (G4) -------------------------------------------------------------------

def complements_by_sections(W: FiniteGroup, lam: Homomorphism,
                            budget: Budget | None = None) -> list[Subgroup]:
    """Every complement of ker λ, as images of homomorphic sections of λ."""
    DxD = lam.target
    limg = lam.image_array()
    cands = [np.nonzero(limg == g)[0] for g in DxD.presentation().gens]
    out = {}
    for imgs in iter_homomorphisms(DxD, W, candidates=cands, budget=budget):
        C = Subgroup.generated(W, imgs)
        out[C.key] = C
    return sorted(out.values(), key=Subgroup.sort_key)


def complements_by_conjugation(W: FiniteGroup, theta: Homomorphism,
                               lam: Homomorphism) -> list[Subgroup]:
    """W-conjugates of θ(D×D); since W = U·θ(D×D), conjugating by U suffices."""
    comp = Subgroup.generated(W, theta.images)
    U = np.nonzero(lam.image_array() == lam.target.identity)[0]
    out = {}
    for w in U:
        mask = np.zeros(W.order, dtype=bool)
        mask[conjugate_set(W, w, comp.members)] = True
        C = Subgroup(W, mask)
        out[C.key] = C
    return sorted(out.values(), key=Subgroup.sort_key)


def factors_preserved(D: FiniteGroup, DxD: DirectProduct, budget: Budget | None = None) -> bool:
    """Every automorphism of D×D maps {D×1, 1×D} to itself.

    Both factors are normal, so inner automorphisms fix them and one
    representative per outer class suffices.
    """
    dd = np.arange(DxD.order)
    first, second = np.divmod(dd, D.order)
    left = Subgroup(DxD, second == D.identity)
    right = Subgroup(DxD, first == D.identity)
    for a in epimorphisms(DxD, DxD, up_to_inner=True, budget=budget):
        img = a.image_array()
        for F in (left, right):
            mask = np.zeros(DxD.order, dtype=bool)
            mask[img[F.members]] = True
            image = Subgroup(DxD, mask)
            if image != left and image != right:
                return False
    return True


def check_g4(D: FiniteGroup, W: FiniteGroup, lam: Homomorphism, theta: Homomorphism,
             budget: Budget | None = None) -> Verdict:
    DxD = lam.target
    limg = lam.image_array()
    U = Subgroup(W, limg == DxD.identity)
    by_sections = complements_by_sections(W, lam, budget)
    by_conj = complements_by_conjugation(W, theta, lam)
    if [c.key for c in by_sections] != [c.key for c in by_conj]:
        return Verdict(FAIL, f"{len(by_sections)} complements by sections vs "
                             f"{len(by_conj)} conjugates of θ(D×D)")
    Ugrp, Uemb = as_group(U)
    normals = [Uemb[N.members] for N in normal_lattice(Ugrp) if N.order > 1]
    dd = np.arange(DxD.order)
    first, second = np.divmod(dd, D.order)
    factor_masks = {"Dx1": second == D.identity, "1xD": first == D.identity}
    for C in by_sections:
        sect = C.members[np.argsort(limg[C.members])]  # sect[x] = element over x
        for fname, fmask in factor_masks.items():
            acting = sect[np.nonzero(fmask)[0]]
            for N in normals:
                trivial = all(np.array_equal(W.mul_vec(a, N), W.mul_vec(N, a)) for a in acting)
                if trivial:
                    return Verdict(FAIL, f"{fname} acts trivially on a normal subgroup of U "
                                         f"of order {len(N)}")
    preserved = factors_preserved(D, DxD, budget)
    if not preserved:
        return Verdict(FAIL, "an automorphism of D×D does not permute the two factors")
    return Verdict(PASS, f"{len(by_sections)} complements (sections = U-conjugates), "
                         f"{len(normals)} nontrivial N ◁ U")


def verify_graph_conditions(params, g2_index_bound: int = 2,
                            budget: Budget | None = None) -> ConditionReport:
    report = ConditionReport()
    report.verdicts["G1"] = _guard(check_g1, params.D, params.U)
    report.verdicts["G2"] = _guard(check_g2, params.D, g2_index_bound, budget)
    report.verdicts["G3"] = _guard(check_g3, params.D, params.W, params.lam, params.theta, budget)
    report.verdicts["G4"] = _guard(check_g4, params.D, params.W, params.lam, params.theta, budget)
    return report
