"""Unit groups: a formal free unit group for symbolic work and concrete field units.

A :class:`FormalUnit` is ``(-1)^sign * prod(x_i ** e_i)`` over named
indeterminates. ``-1`` is a distinguished constant, never an indeterminate.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

__all__ = [
    "FormalUnit",
    "ConcreteUnit",
    "UnitError",
    "ONE",
    "MINUS_ONE",
    "var",
    "unit_mul",
    "unit_inv",
    "unit_cmp",
    "unit_key",
]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class UnitError(ValueError):
    """Raised when units of different kinds or backends are combined."""


@dataclass(frozen=True)
class FormalUnit:
    sign: bool = False
    exponents: tuple[tuple[str, int], ...] = ()
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        exps = self.exponents
        if isinstance(exps, Mapping):
            exps = exps.items()
        cleaned = tuple(sorted((str(k), int(v)) for k, v in exps if int(v) != 0))
        names = [k for k, _ in cleaned]
        if len(set(names)) != len(names):
            raise UnitError(f"repeated indeterminate in {cleaned!r}")
        for name in names:
            if not _IDENT.match(name):
                raise UnitError(f"bad indeterminate name {name!r}")
        object.__setattr__(self, "sign", bool(self.sign))
        object.__setattr__(self, "exponents", cleaned)
        object.__setattr__(self, "_hash", hash((self.sign, cleaned)))

    def __hash__(self) -> int:
        return self._hash

    @classmethod
    def from_map(cls, exponents: Mapping[str, int], sign: bool = False) -> "FormalUnit":
        return cls(sign, tuple(exponents.items()))

    @property
    def is_one(self) -> bool:
        return not self.sign and not self.exponents

    @property
    def is_minus_one(self) -> bool:
        return self.sign and not self.exponents

    @property
    def is_atom(self) -> bool:
        """True for ``-1`` and for a bare indeterminate ``x`` (exponent +1)."""
        if self.is_minus_one:
            return True
        return not self.sign and len(self.exponents) == 1 and self.exponents[0][1] == 1

    @property
    def is_indeterminate(self) -> bool:
        return not self.sign and len(self.exponents) == 1 and self.exponents[0][1] == 1

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(k for k, _ in self.exponents)

    def exponent(self, name: str) -> int:
        for k, v in self.exponents:
            if k == name:
                return v
        return 0

    def __mul__(self, other: "FormalUnit") -> "FormalUnit":
        return unit_mul(self, other)

    def __truediv__(self, other: "FormalUnit") -> "FormalUnit":
        return unit_mul(self, unit_inv(other))

    def __pow__(self, n: int) -> "FormalUnit":
        return FormalUnit(self.sign and n % 2 == 1, tuple((k, v * n) for k, v in self.exponents))

    def __neg__(self) -> "FormalUnit":
        return FormalUnit(not self.sign, self.exponents)

    def __str__(self) -> str:
        if not self.exponents:
            return "-1" if self.sign else "1"
        parts = []
        for k, v in self.exponents:
            parts.append(k if v == 1 else f"{k}^{v}")
        body = "*".join(parts)
        return "-" + body if self.sign else body

    def __repr__(self) -> str:
        return f"FormalUnit({self})"


ONE = FormalUnit()
MINUS_ONE = FormalUnit(True)


def var(name: str) -> FormalUnit:
    """The indeterminate called ``name``."""
    return FormalUnit(False, ((name, 1),))


@dataclass(frozen=True)
class ConcreteUnit:
    """A nonzero element of a concrete field backend.

    ``value`` is an integer code for finite fields and ``+1``/``-1`` for the
    real-sign backend. Arithmetic is delegated to the backend registry in
    :mod:`mwcalc.fields`.
    """

    backend: str
    value: int

    def __post_init__(self):
        from .fields import get_backend

        b = get_backend(self.backend)
        object.__setattr__(self, "value", b.canonical(self.value))
        if b.is_zero(self.value):
            raise UnitError(f"zero is not a unit in {self.backend}")

    def __str__(self) -> str:
        from .fields import get_backend

        return get_backend(self.backend).render(self.value)


Unit = Union[FormalUnit, ConcreteUnit]


def unit_mul(a: Unit, b: Unit) -> Unit:
    if isinstance(a, FormalUnit) and isinstance(b, FormalUnit):
        exps = dict(a.exponents)
        for k, v in b.exponents:
            exps[k] = exps.get(k, 0) + v
        return FormalUnit(a.sign != b.sign, tuple(exps.items()))
    if isinstance(a, ConcreteUnit) and isinstance(b, ConcreteUnit):
        if a.backend != b.backend:
            raise UnitError(f"cannot multiply units of {a.backend} and {b.backend}")
        from .fields import get_backend

        return ConcreteUnit(a.backend, get_backend(a.backend).mul(a.value, b.value))
    raise UnitError(f"cannot multiply {type(a).__name__} by {type(b).__name__}")


def unit_inv(a: Unit) -> Unit:
    if isinstance(a, FormalUnit):
        return FormalUnit(a.sign, tuple((k, -v) for k, v in a.exponents))
    if isinstance(a, ConcreteUnit):
        from .fields import get_backend

        return ConcreteUnit(a.backend, get_backend(a.backend).inv(a.value))
    raise UnitError(f"not a unit: {a!r}")


def unit_key(u: FormalUnit) -> tuple:
    # -1 (empty exponent vector) precedes every indeterminate; ties broken by sign.
    return (u.exponents, u.sign)


def unit_cmp(a: FormalUnit, b: FormalUnit) -> int:
    """Three-way comparison: -1, 0 or 1."""
    ka, kb = unit_key(a), unit_key(b)
    return (ka > kb) - (ka < kb)


def product(units: Iterable[FormalUnit]) -> FormalUnit:
    out = ONE
    for u in units:
        out = unit_mul(out, u)
    return out
