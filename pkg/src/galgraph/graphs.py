"""Finite simple graphs and their text format."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Irreflexive symmetric graph; edges are stored as sorted pairs."""

    vertices: tuple[str, ...]
    edges: frozenset[tuple[str, str]] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        vs = tuple(sorted(set(self.vertices)))
        if len(vs) != len(self.vertices):
            raise GraphError("duplicate vertex names")
        es = set()
        for a, b in self.edges:
            if a == b:
                raise GraphError(f"self-loop on {a!r}")
            if a not in vs or b not in vs:
                raise GraphError(f"edge ({a}, {b}) uses an undeclared vertex")
            es.add((a, b) if a < b else (b, a))
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", frozenset(es))

    @classmethod
    def build(cls, vertices, edges=()) -> "Graph":
        return cls(tuple(vertices), frozenset(tuple(e) for e in edges))

    def adjacent(self, a: str, b: str) -> bool:
        return ((a, b) if a < b else (b, a)) in self.edges

    def sorted_edges(self) -> list[tuple[str, str]]:
        return sorted(self.edges)

    def __len__(self) -> int:
        return len(self.vertices)


def parse_graph(text: str) -> Graph:
    vertices: list[str] = []
    edges: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "v" and len(parts) == 2:
            vertices.append(parts[1])
        elif parts[0] == "e" and len(parts) == 3:
            edges.append((parts[1], parts[2]))
        else:
            raise GraphError(f"line {lineno}: expected 'v <name>' or 'e <a> <b>', got {raw!r}")
    return Graph.build(vertices, edges)


def format_graph(g: Graph) -> str:
    lines = [f"v {v}" for v in g.vertices]
    lines += [f"e {a} {b}" for a, b in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def isomorphism(g: Graph, h: Graph) -> dict[str, str] | None:
    """A vertex bijection preserving adjacency, by brute force with degree pruning."""
    if len(g) != len(h) or len(g.edges) != len(h.edges):
        return None

    def degrees(x: Graph) -> dict[str, int]:
        d = {v: 0 for v in x.vertices}
        for a, b in x.edges:
            d[a] += 1
            d[b] += 1
        return d

    dg, dh = degrees(g), degrees(h)
    if sorted(dg.values()) != sorted(dh.values()):
        return None
    for perm in itertools.permutations(h.vertices):
        f = dict(zip(g.vertices, perm))
        if any(dg[v] != dh[f[v]] for v in g.vertices):
            continue
        if all(h.adjacent(f[a], f[b]) for a, b in g.edges):
            return f
    return None


def are_isomorphic(g: Graph, h: Graph) -> bool:
    return isomorphism(g, h) is not None


def all_graphs(n: int) -> list[Graph]:
    """One graph per isomorphism class on n vertices named v0.. (brute force)."""
    names = [f"v{i}" for i in range(n)]
    pairs = list(itertools.combinations(names, 2))
    reps: list[Graph] = []
    for bits in range(1 << len(pairs)):
        g = Graph.build(names, [p for i, p in enumerate(pairs) if bits >> i & 1])
        if not any(are_isomorphic(g, r) for r in reps):
            reps.append(g)
    return reps
