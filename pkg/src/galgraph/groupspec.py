"""Text literals for groups.

The first line is an expression; ``table`` and ``semidirect`` read their rows
from the following lines, in the order they occur in the expression:

    cyclic 6
    product (cyclic 2) (cyclic 3)
    semidirect (cyclic 7) (cyclic 3)      # then 3 rows of 7 indices
    table 2                               # then 2 rows of 2 indices
    smallgroup 24 12
    builtin:D | builtin:W | builtin:DxD | builtin:GGamma(path/to.graph)
    F 2 <literal>                         # an Artin-Schreier structure F(X, G)
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .groups import CyclicGroup, DenseGroup, DirectProduct, FiniteGroup, GroupError, SemidirectProduct


class LiteralError(ValueError):
    pass


_TOKEN = re.compile(r"\(|\)|[^\s()]+(?:\([^)]*\))?")


def _tokens(line: str) -> list[str]:
    return _TOKEN.findall(line)


class _Parser:
    def __init__(self, text: str, params=None, base: Path | None = None) -> None:
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise LiteralError("empty group literal")
        self.toks = _tokens(lines[0])
        self.pos = 0
        self.rows = lines[1:]
        self.row = 0
        self.params = params
        self.base = base or Path.cwd()

    def next(self) -> str:
        if self.pos >= len(self.toks):
            raise LiteralError("group literal ends early")
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def int_(self) -> int:
        t = self.next()
        try:
            v = int(t)
        except ValueError:
            raise LiteralError(f"expected an integer, got {t!r}") from None
        if v < 1:
            raise LiteralError(f"expected a positive integer, got {v}")
        return v

    def take_rows(self, count: int, width: int, what: str) -> np.ndarray:
        if self.row + count > len(self.rows):
            raise LiteralError(f"{what}: expected {count} rows, found {len(self.rows) - self.row}")
        out = []
        for k in range(count):
            parts = self.rows[self.row + k].split()
            if len(parts) != width:
                raise LiteralError(f"{what}: row {k + 1} has {len(parts)} entries, expected {width}")
            try:
                out.append([int(p) for p in parts])
            except ValueError:
                raise LiteralError(f"{what}: row {k + 1} is not all integers") from None
        self.row += count
        arr = np.array(out, dtype=np.int64)
        if arr.min() < 0 or arr.max() >= width:
            raise LiteralError(f"{what}: entries must lie in 0..{width - 1}")
        return arr

    def group(self) -> FiniteGroup:
        t = self.next()
        if t == "(":
            g = self.group()
            if self.next() != ")":
                raise LiteralError("expected ')'")
            return g
        if t == "cyclic":
            return CyclicGroup(self.int_())
        if t == "product":
            a = self.group()
            b = self.group()
            return DirectProduct(a, b)
        if t == "semidirect":
            n = self.group()
            h = self.group()
            act = self.take_rows(h.order, n.order, "semidirect action")
            try:
                return SemidirectProduct(n, h, act)
            except GroupError as exc:
                raise LiteralError(f"semidirect action: {exc}") from None
        if t == "table":
            n = self.int_()
            tab = self.take_rows(n, n, "table")
            try:
                return DenseGroup(tab.astype(np.int32), name=f"table{n}")
            except GroupError as exc:
                raise LiteralError(f"table: {exc}") from None
        if t == "smallgroup":
            from .catalogue import small_group_uncached

            n, i = self.int_(), self.int_()
            try:
                # a fresh object, so no cached lattice leaks between parses
                return small_group_uncached(n, i)
            except ValueError as exc:
                raise LiteralError(str(exc)) from None
        if t.startswith("builtin:"):
            return self.builtin(t[len("builtin:"):])
        raise LiteralError(f"unknown group form {t!r}")

    def builtin(self, name: str) -> FiniteGroup:
        if self.params is None:
            raise LiteralError(f"builtin:{name} needs parameters (--phat)")
        P = self.params
        if name == "D":
            return P.D
        if name == "W":
            return P.W
        if name == "DxD":
            return P.DxD
        m = re.fullmatch(r"GGamma\((.+)\)", name)
        if m:
            from .codec import encode_graph
            from .graphs import GraphError, parse_graph

            path = Path(m.group(1))
            if not path.is_absolute():
                path = self.base / path
            try:
                g = parse_graph(path.read_text())
            except OSError as exc:
                raise LiteralError(f"cannot read graph file {path}: {exc.strerror}") from None
            except GraphError as exc:
                raise LiteralError(f"{path}: {exc}") from None
            return encode_graph(g, P)
        raise LiteralError(f"unknown builtin {name!r}")

    def done(self) -> None:
        if self.pos != len(self.toks):
            raise LiteralError(f"trailing tokens: {' '.join(self.toks[self.pos:])}")
        if self.row != len(self.rows):
            raise LiteralError(f"{len(self.rows) - self.row} unused row(s) after the literal")


def parse_group_literal(text: str, params=None, base: Path | None = None) -> FiniteGroup:
    p = _Parser(text, params, base)
    g = p.group()
    p.done()
    return g


def parse_as_literal(text: str, params=None, base: Path | None = None):
    """``F <X-size> <group literal>`` -> F(X, G)."""
    from .artin_schreier import build_F

    p = _Parser(text, params, base)
    if p.next() != "F":
        raise LiteralError("an AS literal starts with 'F'")
    x = p.int_()
    g = p.group()
    p.done()
    return build_F(x, g)
