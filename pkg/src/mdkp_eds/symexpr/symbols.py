"""Interned symbols and opaque atoms.

Every atom carries a process-local ``rank`` used for the internal order of
monomial factors, and a deterministic ``key`` used for canonical rendering.
"""
from __future__ import annotations

import itertools
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .expr import Expr

AXES = "txy"
_AXIS_RANK = {a: i for i, a in enumerate(AXES)}

_counter = itertools.count()


class Atom:
    __slots__ = ("rank", "key", "free", "__weakref__")

    def is_symbol(self) -> bool:
        return False


class Symbol(Atom):
    """A coordinate, parameter, invariant or abstract form generator.

    kinds: ``base`` (t, x, y), ``jet`` (u with a sorted multi-index),
    ``fiber`` (v_j), ``param`` (k, lam), ``invariant`` (U, V, W) and
    ``gen`` (named generators of an abstract exterior algebra).
    """

    __slots__ = ("name", "kind", "index", "coord_key")
    _registry: dict[str, "Symbol"] = {}

    def __new__(cls, name: str, kind: str, index):
        sym = cls._registry.get(name)
        if sym is not None:
            return sym
        sym = object.__new__(cls)
        sym.name = name
        sym.kind = kind
        sym.index = index
        sym.rank = next(_counter)
        sym.coord_key = _coord_key(kind, index, name)
        sym.key = (0,) + sym.coord_key
        sym.free = frozenset((sym,))
        cls._registry[name] = sym
        return sym

    def is_symbol(self) -> bool:
        return True

    @property
    def order(self) -> int:
        return len(self.index) if self.kind == "jet" else 0

    def __repr__(self) -> str:
        return self.name

    def __reduce__(self):
        return (Symbol, (self.name, self.kind, self.index))


def _coord_key(kind: str, index, name: str) -> tuple:
    if kind == "base":
        return (0, _AXIS_RANK[index])
    if kind == "jet":
        return (1, len(index), tuple(_AXIS_RANK[a] for a in index))
    if kind == "fiber":
        return (2, index)
    if kind == "param":
        return (3, name)
    if kind == "invariant":
        return (4, name)
    if kind == "gen":
        return (5, index, name)
    raise ValueError(f"unknown symbol kind {kind!r}")


def base(axis: str) -> Symbol:
    if axis not in _AXIS_RANK:
        raise ValueError(f"unknown base variable {axis!r}")
    return Symbol(axis, "base", axis)


def sort_index(index) -> str:
    idx = "".join(index)
    for a in idx:
        if a not in _AXIS_RANK:
            raise ValueError(f"malformed jet index {idx!r}")
    return "".join(sorted(idx, key=_AXIS_RANK.__getitem__))


def jet(index: str = "") -> Symbol:
    idx = sort_index(index)
    return Symbol("u_" + idx if idx else "u", "jet", idx)


def fiber(j: int) -> Symbol:
    if j < 0:
        raise ValueError("fiber index must be non-negative")
    return Symbol(f"v_{j}", "fiber", j)


def param(name: str) -> Symbol:
    return Symbol(name, "param", name)


def invariant(name: str) -> Symbol:
    return Symbol(name, "invariant", name)


def gen(name: str, position: int) -> Symbol:
    """Generator of an abstract exterior algebra; ``position`` fixes its order."""
    existing = Symbol._registry.get(name)
    if existing is not None:
        return existing
    return Symbol(name, "gen", position)


class LnAbs(Atom):
    """ln|arg| for a canonical, sign-normalized argument."""

    __slots__ = ("arg",)
    _registry: dict = {}

    def __new__(cls, arg: "Expr"):
        atom = cls._registry.get(arg)
        if atom is not None:
            return atom
        atom = object.__new__(cls)
        atom.arg = arg
        atom.rank = next(_counter)
        atom.key = (1, arg.sort_key())
        atom.free = arg.free_symbols
        cls._registry[arg] = atom
        return atom

    def __repr__(self) -> str:
        return f"ln({self.arg})"


class PowBase(Atom):
    """Opaque base for powers that cannot be expanded into monomials."""

    __slots__ = ("base",)
    _registry: dict = {}

    def __new__(cls, base_: "Expr"):
        atom = cls._registry.get(base_)
        if atom is not None:
            return atom
        atom = object.__new__(cls)
        atom.base = base_
        atom.rank = next(_counter)
        atom.key = (2, base_.sort_key())
        atom.free = base_.free_symbols
        cls._registry[base_] = atom
        return atom

    def __repr__(self) -> str:
        return f"({self.base})"


T, X, Y = base("t"), base("x"), base("y")
KAPPA = param("k")
LAMBDA = param("lam")
