from __future__ import annotations

import pytest

from galgraph.groups import CyclicGroup
from galgraph.groupspec import LiteralError, parse_as_literal, parse_group_literal
from galgraph.homs import is_isomorphic


def test_cyclic_and_product():
    assert parse_group_literal("cyclic 6").order == 6
    G = parse_group_literal("product (cyclic 2) (cyclic 3)")
    assert G.order == 6 and is_isomorphic(G, CyclicGroup(6))
    nested = parse_group_literal("product (product (cyclic 2) (cyclic 2)) cyclic 3")
    assert nested.order == 12


def test_semidirect_rows():
    rows = "\n".join(" ".join(str(c * pow(2, d, 7) % 7) for c in range(7)) for d in range(3))
    G = parse_group_literal("semidirect (cyclic 7) (cyclic 3)\n" + rows)
    assert G.order == 21 and not G.is_abelian


def test_table_literal():
    G = parse_group_literal("table 3  # C3\n0 1 2\n1 2 0\n2 0 1\n")
    assert is_isomorphic(G, CyclicGroup(3))


def test_smallgroup_and_builtin(P2, tmp_path):
    assert parse_group_literal("smallgroup 24 12").order == 24
    assert parse_group_literal("builtin:D", P2) is P2.D
    assert parse_group_literal("builtin:W", P2) is P2.W
    assert parse_group_literal("builtin:DxD", P2) is P2.DxD
    (tmp_path / "k2.graph").write_text("v a\nv b\ne a b\n")
    enc = parse_group_literal("builtin:GGamma(k2.graph)", P2, tmp_path)
    assert enc.order == 5733


@pytest.mark.parametrize("text, msg", [
    ("", "empty"),
    ("cyclic", "ends early"),
    ("cyclic 0", "positive"),
    ("cyclic x", "integer"),
    ("cyclic 2 3", "trailing"),
    ("torus 3", "unknown group form"),
    ("table 2\n0 1\n", "expected 2 rows"),
    ("table 2\n0 1\n1 2\n", "entries"),
    ("table 2\n0 1\n1 0\n0 1\n", "unused"),
    ("table 2\n0 1 1\n1 0\n", "entries, expected"),
    ("table 3\n0 1 2\n1 0 2\n2 2 0\n", "table"),
    ("semidirect (cyclic 3) (cyclic 2)\n0 1 2\n", "expected 2 rows"),
    ("semidirect (cyclic 3) (cyclic 2)\n0 1 2\n0 0 0\n", "semidirect action"),
    ("smallgroup 8 9", "no group"),
    ("builtin:D", "needs parameters"),
])
def test_literal_errors(text, msg):
    with pytest.raises(LiteralError, match=msg):
        parse_group_literal(text)


def test_builtin_errors(P2, tmp_path):
    with pytest.raises(LiteralError, match="unknown builtin"):
        parse_group_literal("builtin:Q", P2)
    with pytest.raises(LiteralError, match="cannot read"):
        parse_group_literal("builtin:GGamma(missing.graph)", P2, tmp_path)
    (tmp_path / "bad.graph").write_text("v a\ne a a\n")
    with pytest.raises(LiteralError, match="self-loop"):
        parse_group_literal("builtin:GGamma(bad.graph)", P2, tmp_path)


def test_as_literal():
    A = parse_as_literal("F 2 cyclic 3")
    assert A.G.order == 6 and A.X.size == 6
    with pytest.raises(LiteralError):
        parse_as_literal("cyclic 3")
