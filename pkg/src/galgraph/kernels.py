"""Backend selection for the dense-table inner loops.

The compiled ``_speedups`` extension is used when it was built; otherwise the
numpy implementations in ``_pykernels`` take over.  Both expose the same
functions, so callers never branch on the backend.
"""

from __future__ import annotations

from types import ModuleType

from . import _pykernels

try:
    from . import _speedups as _compiled
except ImportError:  # extension not built
    _compiled = None

_active: ModuleType = _compiled if _compiled is not None else _pykernels

KERNEL_NAMES = (
    "closure",
    "extend_hom",
    "check_relators",
    "element_orders",
    "coset_labels",
    "conjugacy_labels",
    "normal_joins",
)


def backend() -> str:
    return "cython" if _active is _compiled else "python"


def available_backends() -> list[str]:
    return ["cython", "python"] if _compiled is not None else ["python"]


def set_backend(name: str) -> None:
    global _active
    if name == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built")
        _active = _compiled
    elif name == "python":
        _active = _pykernels
    else:
        raise ValueError(f"unknown backend {name!r}")


def module(name: str | None = None) -> ModuleType:
    if name is None:
        return _active
    return {"python": _pykernels, "cython": _compiled}[name]


def closure(table, gens, identity):
    return _active.closure(table, gens, identity)


def extend_hom(src, dst, gens, images, src_identity, dst_identity):
    return _active.extend_hom(src, dst, gens, images, src_identity, dst_identity)


def check_relators(table, inv, images, rel_gen, rel_exp, rel_start, identity):
    return _active.check_relators(table, inv, images, rel_gen, rel_exp, rel_start, identity)


def element_orders(table, identity):
    return _active.element_orders(table, identity)


def coset_labels(table, members):
    return _active.coset_labels(table, members)


def conjugacy_labels(table, inv):
    return _active.conjugacy_labels(table, inv)


def normal_joins(table, atoms, identity, limit):
    return _active.normal_joins(table, atoms, identity, limit)
