"""q-shifted factorials ``(s*q^e; q^b)_n`` and products of them.

Exponents are numerators on the lattice (1/D)Z, so ``(q;q)_n`` at D=2 is
``PochSpec(1, 2, 2, n)`` and ``(-q^(1/2);q)_n`` is ``PochSpec(-1, 1, 2, n)``.

Conventions:

* ``1/(x;q)_n`` is the zero series for ``n < 0``.  Catalog sums rely on this,
  e.g. the ``1/(q^2;q^2)_{2j-1}`` factor kills the j=0 term.
* ``(x;q)_n`` in a numerator is never evaluated at ``n < 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

from .series import QSeries, SeriesError

INF = None


@dataclass(frozen=True)
class PochSpec:
    """``(sign * q^(expo_num/D); q^(base_num/D))_length``; ``length=None`` is infinite."""

    sign: int
    expo_num: int
    base_num: int
    length: int | None

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise SeriesError(f"sign must be +1 or -1, got {self.sign}")
        if self.base_num < 1:
            raise SeriesError(f"base exponent must be positive, got {self.base_num}")
        if self.expo_num < 0:
            raise SeriesError(f"negative start exponent {self.expo_num}; use poch_term")

    @property
    def infinite(self) -> bool:
        return self.length is None

    def factor_exponents(self, trunc: int) -> Iterable[int]:
        """Exponents of the factors that are not 1 modulo q^(trunc/D)."""
        k = 0
        while self.length is None or k < self.length:
            m = self.expo_num + k * self.base_num
            if m >= trunc:
                return
            yield m
            k += 1


def _check_length(spec: PochSpec) -> None:
    if spec.length is not None and spec.length < 0:
        raise SeriesError(f"negative length {spec.length} in numerator Pochhammer")


@lru_cache(maxsize=4096)
def poch(spec: PochSpec, denom: int = 1, trunc: int = 1) -> QSeries:
    """Expand the product to truncation."""
    _check_length(spec)
    out = [0] * trunc
    out[0] = 1
    s = spec.sign
    for m in spec.factor_exponents(trunc):
        # multiply in place by (1 - s q^m); m == 0 scales everything
        if m == 0:
            out = [c * (1 - s) for c in out]
            continue
        for k in range(trunc - 1, m - 1, -1):
            out[k] -= s * out[k - m]
    return QSeries(out, denom, trunc)


@lru_cache(maxsize=4096)
def poch_reciprocal(spec: PochSpec, denom: int = 1, trunc: int = 1) -> QSeries:
    """``1/(x;q)_n``; zero for negative finite length."""
    if spec.length is not None and spec.length < 0:
        return QSeries.zero(denom, trunc)
    out = [0] * trunc
    out[0] = 1
    s = spec.sign
    for m in spec.factor_exponents(trunc):
        if m == 0:
            raise SeriesError(f"division by vanishing or non-unit factor (1 - ({s}))")
        # divide in place by (1 - s q^m): geometric recurrence
        for k in range(m, trunc):
            out[k] += s * out[k - m]
    return QSeries(out, denom, trunc)


def triple_poch_infinite(e1: int, e2: int, e3: int, base: int,
                         denom: int = 1, trunc: int = 1) -> QSeries:
    """``(q^e1, q^e2, q^e3; q^base)_inf``."""
    out = QSeries.one(denom, trunc)
    for e in (e1, e2, e3):
        out = out * poch(PochSpec(1, e, base, INF), denom, trunc)
    return out


def qfac(n: int | None, denom: int = 1, trunc: int = 1, base: int = 1) -> QSeries:
    """``(q^b;q^b)_n`` with ``base`` in units of q."""
    b = base * denom
    return poch(PochSpec(1, b, b, n), denom, trunc)


def qfac_inv(n: int | None, denom: int = 1, trunc: int = 1, base: int = 1) -> QSeries:
    """``1/(q^b;q^b)_n``, zero for ``n < 0``."""
    b = base * denom
    return poch_reciprocal(PochSpec(1, b, b, n), denom, trunc)


@dataclass(frozen=True)
class ProductTerm:
    """``coeff * q^(shift/D) * prod(numer) / prod(denom)``.

    ``shift`` may be negative while terms are being combined; only
    :meth:`realize` requires it to be nonnegative.  All Pochhammer specs
    held here start at a positive exponent, so every expanded factor has
    constant term 1.
    """

    coeff: int = 1
    shift: int = 0
    numer: tuple[PochSpec, ...] = field(default=())
    denom: tuple[PochSpec, ...] = field(default=())

    def __mul__(self, other: ProductTerm) -> ProductTerm:
        return ProductTerm(self.coeff * other.coeff, self.shift + other.shift,
                           self.numer + other.numer, self.denom + other.denom)

    def inverse(self) -> ProductTerm:
        if self.coeff not in (1, -1):
            raise SeriesError(f"cannot invert coefficient {self.coeff} over Z")
        return ProductTerm(self.coeff, -self.shift, self.denom, self.numer)

    def scaled(self, coeff: int = 1, shift: int = 0) -> ProductTerm:
        return ProductTerm(self.coeff * coeff, self.shift + shift, self.numer, self.denom)

    @property
    def vanishes(self) -> bool:
        return self.coeff == 0 or any(
            d.length is not None and d.length < 0 for d in self.denom)

    def realize(self, denom: int, trunc: int, extra=None) -> QSeries:
        """Expand to a QSeries; ``extra(t)`` multiplies in a series known below ``t``."""
        if self.vanishes or self.shift >= trunc:
            return QSeries.zero(denom, trunc)
        if self.shift < 0:
            raise SeriesError(f"negative combined exponent {self.shift}/{denom}")
        inner = trunc - self.shift
        s = QSeries.one(denom, inner) if extra is None else extra(inner)
        if s.is_zero():
            return QSeries.zero(denom, trunc)
        for spec in self.numer:
            s = s * poch(spec, denom, inner)
        for spec in self.denom:
            s = s * poch_reciprocal(spec, denom, inner)
        if self.coeff != 1:
            s = s * self.coeff
        if not self.shift:
            return s
        return QSeries(s.coeffs, denom, trunc).shift(self.shift)


def poch_term(sign: int, expo_num: int, base_num: int, length: int | None,
              reciprocal: bool = False) -> ProductTerm:
    """``(s*q^e;q^b)_n`` (or its reciprocal) for any integer ``e``.

    Factors ``1 - s q^m`` with ``m < 0`` are rewritten as
    ``-s q^m (1 - s q^-m)``; a factor with ``m == 0`` contributes ``1 - s``.
    """
    if length is not None and length < 0:
        if reciprocal:
            return ProductTerm(coeff=0)
        raise SeriesError(f"negative length {length} in numerator Pochhammer")
    coeff, shift = 1, 0
    extra = []
    k = 0
    while expo_num + k * base_num <= 0 and (length is None or k < length):
        m = expo_num + k * base_num
        if m < 0:
            coeff *= -sign
            shift += m
            extra.append(PochSpec(sign, -m, base_num, 1))
        else:
            coeff *= 1 - sign
        k += 1
    rest_len = None if length is None else length - k
    tail = ()
    if rest_len is None or rest_len > 0:
        tail = (PochSpec(sign, expo_num + k * base_num, base_num, rest_len),)
    specs = tuple(extra) + tail
    if not reciprocal:
        return ProductTerm(coeff, shift, specs, ())
    if coeff == 0:
        raise SeriesError("division by vanishing factor (1 - 1)")
    if coeff not in (1, -1):
        raise SeriesError(f"reciprocal of non-unit constant {coeff}")
    return ProductTerm(coeff, -shift, (), specs)
