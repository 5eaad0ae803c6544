"""Truncated power series in q^(1/D) with exact integer coefficients.

A :class:`QSeries` stores a dense tuple of Python ints: ``coeffs[k]`` is the
coefficient of ``q**(k/denom)`` for ``0 <= k < trunc``.  Zeros are stored
explicitly.  Values are immutable; every operation returns a new series.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Sequence


class SeriesError(ValueError):
    """Raised for lattice, truncation or invertibility violations."""


class QSeries:
    __slots__ = ("denom", "trunc", "coeffs")

    def __init__(self, coeffs: Iterable[int], denom: int = 1, trunc: int | None = None):
        coeffs = [int(c) for c in coeffs]
        if trunc is None:
            trunc = len(coeffs)
        if denom < 1:
            raise SeriesError(f"denom must be positive, got {denom}")
        if trunc < 1:
            raise SeriesError(f"trunc must be positive, got {trunc}")
        if len(coeffs) < trunc:
            coeffs.extend([0] * (trunc - len(coeffs)))
        object.__setattr__(self, "denom", denom)
        object.__setattr__(self, "trunc", trunc)
        object.__setattr__(self, "coeffs", tuple(coeffs[:trunc]))

    def __setattr__(self, name, value):
        raise AttributeError("QSeries is immutable")

    # construction helpers

    @classmethod
    def zero(cls, denom: int = 1, trunc: int = 1) -> QSeries:
        return cls((), denom, trunc)

    @classmethod
    def one(cls, denom: int = 1, trunc: int = 1) -> QSeries:
        return cls((1,), denom, trunc)

    # container protocol

    def __getitem__(self, k: int) -> int:
        if not 0 <= k < self.trunc:
            raise IndexError(f"exponent numerator {k} outside [0, {self.trunc})")
        return self.coeffs[k]

    def __len__(self) -> int:
        return self.trunc

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return (self.denom, self.trunc, self.coeffs) == (other.denom, other.trunc, other.coeffs)

    def __hash__(self) -> int:
        return hash((self.denom, self.trunc, self.coeffs))

    def __repr__(self) -> str:
        return f"QSeries({self.render()}, denom={self.denom}, trunc={self.trunc})"

    def __str__(self) -> str:
        return self.render()

    # arithmetic

    def __neg__(self) -> QSeries:
        return negate(self)

    def __add__(self, other) -> QSeries:
        return add(self, _coerce(other, self))

    __radd__ = __add__

    def __sub__(self, other) -> QSeries:
        return add(self, negate(_coerce(other, self)))

    def __rsub__(self, other) -> QSeries:
        return add(_coerce(other, self), negate(self))

    def __mul__(self, other) -> QSeries:
        if isinstance(other, int):
            return QSeries((other * c for c in self.coeffs), self.denom, self.trunc)
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> QSeries:
        if n < 0:
            return invert(self) ** (-n)
        result = QSeries.one(self.denom, self.trunc)
        base = self
        while n:
            if n & 1:
                result = mul(result, base)
            n >>= 1
            if n:
                base = mul(base, base)
        return result

    # inspection

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self) -> int | None:
        """Smallest exponent numerator with a nonzero coefficient."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def terms(self) -> list[tuple[int, int]]:
        return [(k, c) for k, c in enumerate(self.coeffs) if c]

    def truncate(self, trunc: int) -> QSeries:
        if trunc > self.trunc:
            raise SeriesError(f"cannot extend truncation from {self.trunc} to {trunc}")
        return QSeries(self.coeffs[:trunc], self.denom, trunc)

    def shift(self, expo_num: int, sign: int = 1) -> QSeries:
        """Multiply by ``sign * q**(expo_num/denom)``; truncation is kept."""
        if expo_num < 0:
            raise SeriesError(f"negative exponent numerator {expo_num}")
        out = [0] * self.trunc
        for k in range(self.trunc - expo_num):
            out[k + expo_num] = sign * self.coeffs[k]
        return QSeries(out, self.denom, self.trunc)

    def stretch(self, factor: int, trunc: int | None = None) -> QSeries:
        """Substitute q -> q**factor on the same lattice.

        The input is known below ``trunc`` so the result is known below
        ``factor * trunc``; pass ``trunc`` to cut it shorter.
        """
        if factor < 1:
            raise SeriesError(f"stretch factor must be positive, got {factor}")
        new_trunc = factor * self.trunc if trunc is None else trunc
        if new_trunc > factor * self.trunc:
            raise SeriesError(f"stretched series only known below {factor * self.trunc}")
        out = [0] * new_trunc
        for k, c in enumerate(self.coeffs):
            if k * factor >= new_trunc:
                break
            out[k * factor] = c
        return QSeries(out, self.denom, new_trunc)

    # rendering

    def render(self) -> str:
        def power(k: int) -> str:
            if self.denom == 1 or k % self.denom == 0:
                e = k // self.denom
                return "" if e == 0 else ("q" if e == 1 else f"q^{e}")
            return f"q^({k}/{self.denom})"

        parts = []
        for k, c in self.terms():
            p = power(k)
            if not p:
                parts.append(str(c))
            elif c == 1:
                parts.append(p)
            elif c == -1:
                parts.append(f"-{p}")
            else:
                parts.append(f"{c}*{p}")
        body = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        return f"{body} + O({power(self.trunc) or '1'})"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["expo_num", "denom", "coeff"])
        for k, c in self.terms():
            writer.writerow([k, self.denom, c])
        return buf.getvalue()


def _coerce(other, like: QSeries) -> QSeries:
    if isinstance(other, QSeries):
        return other
    if isinstance(other, int):
        return QSeries((other,), like.denom, like.trunc)
    raise TypeError(f"cannot combine QSeries with {type(other).__name__}")


def _check_denoms(a: QSeries, b: QSeries) -> None:
    if a.denom != b.denom:
        raise SeriesError(f"denominator mismatch: {a.denom} vs {b.denom}; rescale first")


def monomial(coeff: int, expo_num: int, denom: int = 1, trunc: int = 1) -> QSeries:
    """``coeff * q**(expo_num/denom)`` truncated at ``trunc``."""
    if expo_num < 0:
        raise SeriesError(f"negative exponent numerator {expo_num}")
    out = [0] * trunc
    if expo_num < trunc:
        out[expo_num] = coeff
    return QSeries(out, denom, trunc)


def from_terms(terms: Iterable[tuple[int, int]], denom: int = 1, trunc: int = 1) -> QSeries:
    """Accumulate ``(expo_num, coeff)`` pairs; exponents at or past trunc are dropped."""
    out = [0] * trunc
    for k, c in terms:
        if k < 0:
            raise SeriesError(f"negative exponent numerator {k}")
        if k < trunc:
            out[k] += c
    return QSeries(out, denom, trunc)


def add(a: QSeries, b: QSeries) -> QSeries:
    _check_denoms(a, b)
    t = min(a.trunc, b.trunc)
    return QSeries((x + y for x, y in zip(a.coeffs[:t], b.coeffs[:t])), a.denom, t)


def negate(a: QSeries) -> QSeries:
    return QSeries((-c for c in a.coeffs), a.denom, a.trunc)


def mul(a: QSeries, b: QSeries) -> QSeries:
    _check_denoms(a, b)
    t = min(a.trunc, b.trunc)
    out = [0] * t
    bc = b.coeffs
    for i, x in enumerate(a.coeffs[:t]):
        if not x:
            continue
        for j in range(t - i):
            y = bc[j]
            if y:
                out[i + j] += x * y
    return QSeries(out, a.denom, t)


def product(factors: Sequence[QSeries], denom: int = 1, trunc: int = 1) -> QSeries:
    result = QSeries.one(denom, trunc)
    for f in factors:
        result = mul(result, f)
    return result


def invert(a: QSeries) -> QSeries:
    """Multiplicative inverse; the constant term must be +1 or -1."""
    c0 = a.coeffs[0]
    if c0 not in (1, -1):
        raise SeriesError(f"constant term {c0} is not a unit in Z")
    t = a.trunc
    ac = a.coeffs
    out = [0] * t
    out[0] = c0
    for k in range(1, t):
        s = 0
        for i in range(1, k + 1):
            x = ac[i]
            if x:
                s += x * out[k - i]
        out[k] = -s * c0
    return QSeries(out, a.denom, t)


def rescale(a: QSeries, new_denom: int) -> QSeries:
    """Move ``a`` to the lattice (1/new_denom)Z without changing the formal series."""
    if new_denom < 1:
        raise SeriesError(f"denom must be positive, got {new_denom}")
    if new_denom % a.denom == 0:
        f = new_denom // a.denom
        s = a.stretch(f)
        return QSeries(s.coeffs, new_denom, s.trunc)
    if a.denom % new_denom == 0:
        f = a.denom // new_denom
        bad = [k for k, _ in a.terms() if k % f]
        if bad:
            raise SeriesError(
                f"lossy rescale: exponent {bad[0]}/{a.denom} not on lattice 1/{new_denom}")
        return QSeries(a.coeffs[::f], new_denom, -(-a.trunc // f))
    raise SeriesError(f"incompatible denominators {a.denom} -> {new_denom}")


@dataclass(frozen=True)
class Match:
    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class FirstMismatch:
    expo_num: int
    lhs_coeff: int
    rhs_coeff: int

    def __bool__(self) -> bool:
        return False


MATCH = Match()


def equal_up_to(a: QSeries, b: QSeries, order: int) -> Match | FirstMismatch:
    """Compare coefficients with exponent numerator below ``order``."""
    _check_denoms(a, b)
    if order > a.trunc or order > b.trunc:
        raise SeriesError(
            f"order {order} exceeds known truncation (lhs {a.trunc}, rhs {b.trunc})")
    for k in range(order):
        if a.coeffs[k] != b.coeffs[k]:
            return FirstMismatch(k, a.coeffs[k], b.coeffs[k])
    return MATCH
