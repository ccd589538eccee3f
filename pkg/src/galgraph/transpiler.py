"""Translation of graph formulas into ring-language template formulas.

Each graph variable x becomes a tuple x̄ = (x.1, ..., x.l) with l = |D|.
The four rules are

    R(x, y)  ->  Rho(D, W, x̄, ȳ)
    ¬φ       ->  ¬φ'
    φ ∧ ψ    ->  φ' ∧ ψ'
    ∃x φ     ->  ∃x̄ (Alpha(l, D, x̄) ∧ φ')

and vertex equality goes to SameField(x̄, ȳ).  Templates stay symbolic; the
group-level evaluator gives them meaning through the decoded graph of a
group: Alpha holds of vertex kernels, Rho is the edge relation, SameField is
kernel equality and Contain is reverse kernel inclusion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

from .codec import DecodeResult, GraphParams, decode_graph_full, encode_graph
from .formulas import (
    And,
    Const,
    Eq,
    Exists,
    Formula,
    FormulaError,
    Not,
    Rel,
    all_assignments,
    desugar,
    eval_graph,
    free_vars,
)
from .graphs import Graph

PAC, PRC = "PAC", "PRC"


# -- template AST ----------------------------------------------------------------

Tuple_ = tuple[str, ...]


@dataclass(frozen=True)
class Alpha:
    length: int
    group: str
    xs: Tuple_


@dataclass(frozen=True)
class Rho:
    group: str
    ext: str
    flavor: str
    xs: Tuple_
    ys: Tuple_


@dataclass(frozen=True)
class Contain:
    xs: Tuple_
    ys: Tuple_


@dataclass(frozen=True)
class SameField:
    xs: Tuple_
    ys: Tuple_


@dataclass(frozen=True)
class TNot:
    body: "Template"


@dataclass(frozen=True)
class TAnd:
    left: "Template"
    right: "Template"


@dataclass(frozen=True)
class TExists:
    xs: Tuple_
    body: "Template"


Template = Union[Alpha, Rho, Contain, SameField, TNot, TAnd, TExists]


def tuple_of(var: str, length: int) -> Tuple_:
    return tuple(f"{var}.{i}" for i in range(1, length + 1))


def base_name(xs: Tuple_) -> str:
    return xs[0].rsplit(".", 1)[0]


def translate(f: Formula, params: GraphParams, flavor: str = PAC) -> Template:
    if flavor not in (PAC, PRC):
        raise ValueError(f"unknown flavor {flavor!r}")
    length = params.D.order

    def tr(g: Formula) -> Template:
        if isinstance(g, Rel):
            return Rho("D", "W", flavor, _tup(g.x), _tup(g.y))
        if isinstance(g, Eq):
            return SameField(_tup(g.x), _tup(g.y))
        if isinstance(g, Not):
            return TNot(tr(g.body))
        if isinstance(g, And):
            return TAnd(tr(g.left), tr(g.right))
        if isinstance(g, Exists):
            xs = tuple_of(g.var, length)
            return TExists(xs, TAnd(Alpha(length, "D", xs), tr(g.body)))
        raise FormulaError(f"not desugared: {type(g).__name__}")

    def _tup(t) -> Tuple_:
        if isinstance(t, Const):
            raise FormulaError("constants must be eliminated before translation")
        return tuple_of(t, length)

    return tr(desugar(f))


def template_sexpr(t: Template) -> str:
    if isinstance(t, Alpha):
        return f"(Alpha {t.length} {t.group} {' '.join(t.xs)})"
    if isinstance(t, Rho):
        return f"(Rho {t.group} {t.ext} {t.flavor} ({' '.join(t.xs)}) ({' '.join(t.ys)}))"
    if isinstance(t, Contain):
        return f"(Contain ({' '.join(t.xs)}) ({' '.join(t.ys)}))"
    if isinstance(t, SameField):
        return f"(SameField ({' '.join(t.xs)}) ({' '.join(t.ys)}))"
    if isinstance(t, TNot):
        return f"(not {template_sexpr(t.body)})"
    if isinstance(t, TAnd):
        return f"(and {template_sexpr(t.left)} {template_sexpr(t.right)})"
    return f"(exists ({' '.join(t.xs)}) {template_sexpr(t.body)})"


def template_size(t: Template) -> int:
    if isinstance(t, (Alpha, Rho, Contain, SameField)):
        return 1
    if isinstance(t, TNot):
        return 1 + template_size(t.body)
    if isinstance(t, TAnd):
        return 1 + template_size(t.left) + template_size(t.right)
    return 1 + template_size(t.body)


def flavors(t: Template) -> set[str]:
    if isinstance(t, Rho):
        return {t.flavor}
    if isinstance(t, (Alpha, Contain, SameField)):
        return set()
    if isinstance(t, TNot):
        return flavors(t.body)
    if isinstance(t, TAnd):
        return flavors(t.left) | flavors(t.right)
    return flavors(t.body)


def guarded(t: Template) -> bool:
    """Every quantified tuple has length l and is guarded by its Alpha atom."""
    if isinstance(t, (Alpha, Rho, Contain, SameField)):
        return True
    if isinstance(t, TNot):
        return guarded(t.body)
    if isinstance(t, TAnd):
        return guarded(t.left) and guarded(t.right)
    b = t.body
    return (isinstance(b, TAnd) and isinstance(b.left, Alpha) and b.left.xs == t.xs
            and b.left.length == len(t.xs) and guarded(b.right))


# -- group-level semantics -------------------------------------------------------

class GroupModel:
    """Template semantics over the decoded graph of a group."""

    def __init__(self, decoded: DecodeResult) -> None:
        self.decoded = decoded
        self.domain = list(decoded.graph.vertices)
        self.graph = decoded.graph
        self.kernels = dict(zip(self.domain, decoded.kernels))

    def alpha(self, v: str) -> bool:
        return v in self.kernels

    def rho(self, a: str, b: str) -> bool:
        return self.graph.adjacent(a, b) if a != b else False

    def same(self, a: str, b: str) -> bool:
        return a == b

    def contain(self, a: str, b: str) -> bool:
        """K_ā ⊆ K_b̄, i.e. the kernel for b lies inside the kernel for a."""
        return self.kernels[b].issubset(self.kernels[a])


def eval_template(model: GroupModel, t: Template, assignment: dict[str, str] | None = None) -> bool:
    env = dict(assignment or {})

    def val(xs: Tuple_) -> str:
        name = base_name(xs)
        if name not in env:
            raise FormulaError(f"unassigned tuple variable {name}")
        return env[name]

    def ev(s: Template) -> bool:
        if isinstance(s, Alpha):
            return model.alpha(val(s.xs))
        if isinstance(s, Rho):
            return model.rho(val(s.xs), val(s.ys))
        if isinstance(s, SameField):
            return model.same(val(s.xs), val(s.ys))
        if isinstance(s, Contain):
            return model.contain(val(s.xs), val(s.ys))
        if isinstance(s, TNot):
            return not ev(s.body)
        if isinstance(s, TAnd):
            return ev(s.left) and ev(s.right)
        name = base_name(s.xs)
        had, saved = name in env, env.get(name)
        found = False
        for v in model.domain:
            env[name] = v
            if ev(s.body):
                found = True
                break
        if had:
            env[name] = saved
        else:
            env.pop(name, None)
        return found

    return ev(t)


def eval_group(G, t: Template, params: GraphParams, budget=None,
               decoded: DecodeResult | None = None) -> bool:
    if decoded is None:
        decoded = decode_graph_full(G, params, budget)
    return eval_template(GroupModel(decoded), t)


def check_interpretation(graph: Graph, f: Formula, params: GraphParams, budget=None,
                         decoded: DecodeResult | None = None) -> bool:
    """Graph truth of φ agrees with group truth of φ' on G_Γ."""
    if free_vars(f):
        raise FormulaError("check_interpretation needs a sentence")
    if decoded is None:
        decoded = decode_graph_full(encode_graph(graph, params), params, budget)
    lhs = eval_graph(graph, f)
    rhs = eval_template(GroupModel(decoded), translate(f, params, PAC))
    return lhs == rhs


# -- interpretations and the reduction check ---------------------------------------

@dataclass
class Interpretation:
    """An interpretation of a graph B in a structure A.

    ``domain`` lists δ(A^n) explicitly, ``f`` maps it onto the vertices of B,
    ``reduction`` is the formula map and ``evaluate(A, φ', env)`` decides A-side
    truth with graph variables bound to domain elements.
    """

    domain: list
    f: dict
    reduction: Callable[[Formula], object]
    evaluate: Callable[[object, object, dict], bool]


def identity_interpretation(graph: Graph) -> Interpretation:
    return Interpretation(
        domain=list(graph.vertices),
        f={v: v for v in graph.vertices},
        reduction=lambda phi: phi,
        evaluate=lambda A, phi, env: eval_graph(A, phi, env),
    )


def kernel_map(enc, decoded: DecodeResult) -> dict[str, str]:
    """Decoded vertex -> original vertex a with kernel equal to ker π_a."""
    from .homs import EpiKernel

    out = {}
    for name, K in zip(decoded.graph.vertices, decoded.kernels):
        for a, v in enumerate(enc.vertex_names):
            if EpiKernel(enc.pi_vertex(a)) == K:
                out[name] = v
                break
    return out


def group_interpretation(enc, params: GraphParams, decoded: DecodeResult | None = None,
                         f: dict | None = None) -> Interpretation:
    if decoded is None:
        decoded = decode_graph_full(enc, params)
    model = GroupModel(decoded)
    return Interpretation(
        domain=list(decoded.graph.vertices),
        f=f if f is not None else kernel_map(enc, decoded),
        reduction=lambda phi: translate(phi, params, PAC),
        evaluate=lambda A, psi, env: eval_template(model, psi, env),
    )


def check_reduction(A, B: Graph, interp: Interpretation, phi: Formula) -> bool:
    """B ⊨ φ(f(ā)) iff A ⊨ φ'(ā) for all ā, together with the atomic instances.

    The atomic check runs over every pair of domain elements for R and =;
    then φ is checked under every assignment of its free variables.
    """
    if set(interp.f.values()) != set(B.vertices) or set(interp.f) != set(interp.domain):
        raise ValueError("f is not a surjection from the domain onto B")
    atoms = [Rel("x", "y"), Eq("x", "y")]
    for atom in atoms:
        image = interp.reduction(atom)
        for a in interp.domain:
            for b in interp.domain:
                lhs = eval_graph(B, atom, {"x": interp.f[a], "y": interp.f[b]})
                if lhs != interp.evaluate(A, image, {"x": a, "y": b}):
                    return False
    image = interp.reduction(phi)
    for env in all_assignments(free_vars(phi), interp.domain):
        lhs = eval_graph(B, phi, {k: interp.f[v] for k, v in env.items()})
        if lhs != interp.evaluate(A, image, env):
            return False
    return True
