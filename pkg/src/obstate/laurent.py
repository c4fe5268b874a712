"""Truncated Laurent series in the regularization parameter eps.

A :class:`LaurentSeries` is a finite Laurent polynomial with complex
coefficients, ``sum_k c_k eps**k`` for ``min_order <= k <= max_order``.
Values are immutable; every operation returns a new series.

The two projectors of minimal subtraction live here as well:
:func:`pole_part` (the operator K) keeps the strictly negative powers and
:func:`finite_part` (I - K) keeps the rest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Number
from typing import Iterable, Iterator, Mapping

from .errors import PoleAtZero

DEFAULT_MIN_ORDER = -8
DEFAULT_MAX_ORDER = 2
EQ_ATOL = 1e-12

__all__ = [
    "DEFAULT_MIN_ORDER",
    "DEFAULT_MAX_ORDER",
    "LaurentSeries",
    "add",
    "mul",
    "pole_part",
    "finite_part",
    "evaluate",
]


@dataclass(frozen=True, eq=False)
class LaurentSeries:
    """Laurent polynomial ``sum coeffs[k] * eps**(min_order + k)``.

    Stored leading/trailing zeros are allowed; equality compares every
    exponent in the union of both ranges with absolute tolerance 1e-12,
    missing exponents reading as zero.
    """

    min_order: int
    coeffs: tuple[complex, ...]

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coeffs)
        if not coeffs:
            raise ValueError("a LaurentSeries needs at least one stored coefficient")
        if not all(math.isfinite(c.real) and math.isfinite(c.imag) for c in coeffs):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "min_order", int(self.min_order))
        object.__setattr__(self, "coeffs", coeffs)

    # construction helpers

    @classmethod
    def zero(cls, order: int = 0) -> LaurentSeries:
        return cls(order, (0j,))

    @classmethod
    def constant(cls, value: complex) -> LaurentSeries:
        return cls(0, (value,))

    @classmethod
    def monomial(cls, value: complex, order: int) -> LaurentSeries:
        """``value * eps**order``."""
        return cls(order, (value,))

    @classmethod
    def from_terms(cls, terms: Mapping[int, complex]) -> LaurentSeries:
        """Build from an ``{exponent: coefficient}`` mapping."""
        if not terms:
            return cls.zero()
        lo, hi = min(terms), max(terms)
        return cls(lo, tuple(terms.get(k, 0j) for k in range(lo, hi + 1)))

    # accessors

    @property
    def max_order(self) -> int:
        return self.min_order + len(self.coeffs) - 1

    def coefficient(self, order: int) -> complex:
        """Coefficient of ``eps**order``; zero outside the stored range."""
        idx = order - self.min_order
        if 0 <= idx < len(self.coeffs):
            return self.coeffs[idx]
        return 0j

    def finite_coefficient(self) -> complex:
        return self.coefficient(0)

    def terms(self) -> Iterator[tuple[int, complex]]:
        """Yield ``(exponent, coefficient)`` pairs for the stored range."""
        for k, c in enumerate(self.coeffs):
            yield self.min_order + k, c

    def is_zero(self, atol: float = 0.0) -> bool:
        return all(abs(c) <= atol for c in self.coeffs)

    def trimmed(self) -> LaurentSeries:
        """Drop exactly-zero leading and trailing coefficients."""
        nz = [k for k, c in self.terms() if c != 0]
        if not nz:
            return LaurentSeries.zero()
        return LaurentSeries(nz[0], tuple(self.coefficient(k) for k in range(nz[0], nz[-1] + 1)))

    # comparison

    def isclose(self, other: LaurentSeries, atol: float = EQ_ATOL) -> bool:
        lo = min(self.min_order, other.min_order)
        hi = max(self.max_order, other.max_order)
        return all(abs(self.coefficient(k) - other.coefficient(k)) <= atol for k in range(lo, hi + 1))

    def __eq__(self, other):
        if isinstance(other, Number):
            other = LaurentSeries.constant(other)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self.isclose(other)

    __hash__ = None

    # arithmetic

    def __add__(self, other):
        if isinstance(other, Number):
            other = LaurentSeries.constant(other)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.min_order, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, Number):
            other = LaurentSeries.constant(other)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            return mul(self, other)
        if isinstance(other, Number):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def scale(self, factor: complex) -> LaurentSeries:
        return LaurentSeries(self.min_order, tuple(c * factor for c in self.coeffs))

    def __call__(self, epsilon: complex) -> complex:
        return evaluate(self, epsilon)

    # serialization

    def to_text(self) -> str:
        """Render as ``a*eps^-2 + b*eps^-1 + c + d*eps``; zero terms are omitted."""
        parts: list[str] = []
        for k, c in self.terms():
            if c == 0:
                continue
            sign, body = _render_term(c, k)
            if not parts:
                parts.append(("-" if sign < 0 else "") + body)
            else:
                parts.append((" - " if sign < 0 else " + ") + body)
        return "".join(parts) if parts else "0"

    def __str__(self):
        return self.to_text()

    def to_json(self) -> dict:
        return {
            "min_order": self.min_order,
            "coeffs": [[c.real, c.imag] for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> LaurentSeries:
        coeffs = []
        for c in data["coeffs"]:
            if isinstance(c, (list, tuple)):
                coeffs.append(complex(c[0], c[1]))
            else:
                coeffs.append(complex(c))
        return cls(int(data["min_order"]), tuple(coeffs))


def _fmt_real(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _render_term(c: complex, k: int) -> tuple[int, str]:
    if k == 0:
        power = ""
    elif k == 1:
        power = "eps"
    else:
        power = f"eps^{k}"

    if c.imag == 0:
        sign = -1 if c.real < 0 else 1
        mag = abs(c.real)
        if not power:
            return sign, _fmt_real(mag)
        if mag == 1:
            return sign, power
        return sign, f"{_fmt_real(mag)}*{power}"

    im_sign = "-" if c.imag < 0 else "+"
    num = f"({_fmt_real(c.real)}{im_sign}{_fmt_real(abs(c.imag))}j)"
    return 1, f"{num}*{power}" if power else num


def add(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    lo = min(a.min_order, b.min_order)
    hi = max(a.max_order, b.max_order)
    return LaurentSeries(lo, tuple(a.coefficient(k) + b.coefficient(k) for k in range(lo, hi + 1)))


def mul(a: LaurentSeries, b: LaurentSeries, max_order: int | None = None) -> LaurentSeries:
    """Cauchy product truncated at ``max_order``.

    The default truncation is ``max(DEFAULT_MAX_ORDER, a.max_order,
    b.max_order)`` so multiplying by a constant never loses stored terms.
    The result's ``min_order`` is always the sum of the inputs' min orders.
    """
    if max_order is None:
        max_order = max(DEFAULT_MAX_ORDER, a.max_order, b.max_order)
    lo = a.min_order + b.min_order
    hi = min(a.max_order + b.max_order, max_order)
    if hi < lo:
        return LaurentSeries.zero(max_order)
    out = [0j] * (hi - lo + 1)
    for i, ca in enumerate(a.coeffs):
        if ca == 0:
            continue
        for j, cb in enumerate(b.coeffs):
            idx = i + j
            if idx >= len(out):
                break
            out[idx] += ca * cb
    return LaurentSeries(lo, tuple(out))


def pole_part(a: LaurentSeries) -> LaurentSeries:
    """Minimal-subtraction operator K: keep only ``eps**k`` with ``k < 0``."""
    return LaurentSeries(a.min_order, tuple(c if k < 0 else 0j for k, c in a.terms()))


def finite_part(a: LaurentSeries) -> LaurentSeries:
    """Complement I - K: keep only ``eps**k`` with ``k >= 0``."""
    return LaurentSeries(a.min_order, tuple(c if k >= 0 else 0j for k, c in a.terms()))


def evaluate(a: LaurentSeries, epsilon: complex) -> complex:
    if epsilon == 0:
        if any(c != 0 for k, c in a.terms() if k < 0):
            raise PoleAtZero("series has a pole at eps = 0")
        return a.coefficient(0)
    return sum((c * epsilon**k for k, c in a.terms()), 0j)


def sum_series(items: Iterable[LaurentSeries]) -> LaurentSeries:
    total = LaurentSeries.zero()
    for s in items:
        total = add(total, s)
    return total
