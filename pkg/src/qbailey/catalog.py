"""Registry of the q-series identities, Bailey pairs and mock theta series.

Each identity side is written out directly from its displayed formula: the
exponent polynomial and the factor list are typed in by hand, and no Bailey
machinery is involved.  The machinery is used only by the cross-checks and
by :func:`gen_even_power_identity`.

All sums start at their displayed lower bound.  Terms carrying a factor
``1/(x;q)_m`` with ``m < 0`` are skipped before any numerator factor is
built, so ``(q^2;q^4)_{j-1}`` is never expanded at j = 0.
"""

from __future__ import annotations

import contextvars
import itertools
import re
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from . import bailey
from .bailey import Mono, MultifoldPair, OnefoldPair
from .products import INF, PochSpec, ProductTerm, poch, poch_reciprocal, triple_poch_infinite
from .report import ERROR, MATCH, MISMATCH, Mismatch, VerifyReport
from .series import QSeries, SeriesError, equal_up_to, from_terms

LHS, RHS = "lhs", "rhs"

# multi-index count above which gen_even_power_identity refuses to build
MAX_TERMS = 50_000


class UnknownEntry(KeyError):
    pass


_term_count: contextvars.ContextVar[list[int] | None] = contextvars.ContextVar(
    "term_count", default=None)


def _tally(n: int = 1) -> None:
    box = _term_count.get()
    if box is not None:
        box[0] += n


# factor shorthands, exponents in lattice units

def num(sign: int, e: int, b: int, n: int | None) -> ProductTerm:
    return ProductTerm(numer=(PochSpec(sign, e, b, n),))


def den(sign: int, e: int, b: int, n: int | None) -> ProductTerm:
    if n is not None and n < 0:
        return ProductTerm(coeff=0)
    return ProductTerm(denom=(PochSpec(sign, e, b, n),))


def mono(coeff: int, shift: int) -> ProductTerm:
    return ProductTerm(coeff, shift)


def inf_prod(sign: int, e: int, b: int, denom: int, trunc: int) -> QSeries:
    return poch(PochSpec(sign, e, b, INF), denom, trunc)


def inf_prod_inv(sign: int, e: int, b: int, denom: int, trunc: int) -> QSeries:
    return poch_reciprocal(PochSpec(sign, e, b, INF), denom, trunc)


def sum_terms(terms: Iterable[ProductTerm], denom: int, trunc: int) -> QSeries:
    """Sum product terms; terms that vanish or sit past truncation are skipped."""
    out = [0] * trunc
    for t in terms:
        if t.vanishes or t.shift >= trunc:
            continue
        _tally()
        s = t.realize(denom, trunc)
        for k, c in enumerate(s.coeffs):
            if c:
                out[k] += c
    return QSeries(out, denom, trunc)


def indefinite_theta(pieces: Iterable[tuple[int, int]], denom: int, trunc: int) -> QSeries:
    """Accumulate ``(coeff, exponent)`` pieces; exponents were combined by the caller."""
    terms = []
    for c, e in pieces:
        if e < 0:
            raise SeriesError(f"negative combined exponent {e}/{denom} in theta series")
        terms.append((e, c))
    _tally(len(terms))
    return from_terms(terms, denom, trunc)


def _range_while(f: Callable[[int], int], trunc: int, start: int = 0) -> Iterator[int]:
    """n = start, start+1, ... while the increasing bound ``f(n)`` is below trunc."""
    n = start
    while f(n) < trunc:
        yield n
        n += 1


# mock theta series

def psi(trunc: int) -> QSeries:
    """sum_{n>=1} q^(n(n+1)/2) / (q;q^2)_n."""
    return sum_terms((mono(1, n * (n + 1) // 2) * den(1, 1, 2, n)
                      for n in _range_while(lambda n: n * (n + 1) // 2, trunc, 1)), 1, trunc)


def omega_like(trunc: int) -> QSeries:
    """sum_{n>=0} q^(2n^2+2n) / (-q;q)_(2n+1)."""
    return sum_terms((mono(1, 2 * n * n + 2 * n) * den(-1, 1, 1, 2 * n + 1)
                      for n in _range_while(lambda n: 2 * n * n + 2 * n, trunc)), 1, trunc)


def nu_like(trunc: int) -> QSeries:
    """sum_{n>=0} q^(n^2+n) / (-q;q^2)_(n+1)."""
    return sum_terms((mono(1, n * n + n) * den(-1, 1, 2, n + 1)
                      for n in _range_while(lambda n: n * n + n, trunc)), 1, trunc)


@dataclass(frozen=True)
class MockThetaFn:
    id: str
    builder: Callable[[int], QSeries]
    description: str


MOCK_THETA = {
    m.id: m for m in (
        MockThetaFn("psi", psi, "psi(q) = sum_{n>=1} q^{n(n+1)/2}/(q;q^2)_n"),
        MockThetaFn("omega-like", omega_like, "sum_{n>=0} q^{2n^2+2n}/(-q)_{2n+1}"),
        MockThetaFn("nu-like", nu_like, "sum_{n>=0} q^{n^2+n}/(-q;q^2)_{n+1}"),
        MockThetaFn("third-order", nu_like, "third-order mock theta, same series as nu-like"),
    )
}


# identity sides

def omega_triple_sum(trunc: int, _sign: int = -1, _jshift: int = 1) -> QSeries:
    # the two keyword hooks exist for mutation tests only
    def terms():
        for n1 in _range_while(lambda n: n * n + n, trunc):
            for n2 in _range_while(lambda n: n * n + n + n1 * n1 + n1, trunc):
                for j in range(min(n1, n2) + 1):
                    e = j * j + _jshift * j + n1 * n1 + n2 * n2 + n1 + n2
                    yield (mono(_sign ** j, e) * den(1, 1, 1, n1 - j) * den(1, 1, 1, n2 - j)
                           * den(1, 1, 1, n1 + n2 + 1) * den(1, 2, 2, j))
    return sum_terms(terms(), 1, trunc)


def omega_product_side(trunc: int) -> QSeries:
    return inf_prod(-1, 1, 1, 1, trunc) * inf_prod_inv(1, 1, 1, 1, trunc) * omega_like(trunc)


def nu_triple_sum(trunc: int) -> QSeries:
    def terms():
        tri = lambda n: n * (n + 1) // 2
        for n1 in _range_while(tri, trunc):
            for n2 in _range_while(lambda n: tri(n) + tri(n1), trunc):
                for j in range(min(n1, n2) + 1):
                    e = j * j + tri(n1) + tri(n2) + j
                    yield (mono((-1) ** j, e) * num(-1, 1, 1, n1) * num(-1, 1, 1, n2)
                           * den(1, 1, 1, n1 - j) * den(1, 1, 1, n2 - j)
                           * den(1, 1, 1, n1 + n2 + 1) * den(1, 2, 2, j))
    return sum_terms(terms(), 1, trunc)


def nu_product_side(trunc: int) -> QSeries:
    pre = (inf_prod(-1, 1, 1, 1, trunc) * inf_prod(-1, 1, 2, 1, trunc)
           * inf_prod_inv(1, 1, 1, 1, trunc) * inf_prod_inv(1, 1, 2, 1, trunc))
    return pre * nu_like(trunc)


def psi_triple_sum(trunc: int) -> QSeries:
    def terms():
        for n1 in _range_while(lambda n: n * n, trunc):
            for n2 in _range_while(lambda n: n * n + n1 * n1, trunc):
                # j = 0 drops out through 1/(q^2;q^2)_{-1}
                for j in range(1, min(n1, n2) + 1):
                    e = 2 * j * j + n1 * n1 + n2 * n2
                    yield (mono((-1) ** (n1 + n2 + j - 1), e)
                           * den(1, 2, 2, n1 - j) * den(1, 2, 2, n2 - j)
                           * den(1, 2, 2, n1 + n2) * den(1, 2, 2, 2 * j - 1)
                           * num(1, 1, 2, n1) * num(1, 1, 2, n2) * num(1, 2, 4, j - 1))
    return sum_terms(terms(), 1, trunc)


def psi_product_side(trunc: int) -> QSeries:
    pre = (inf_prod(1, 1, 2, 1, trunc) ** 2 * inf_prod(1, 4, 4, 1, trunc)
           * inf_prod_inv(1, 2, 2, 1, trunc) ** 2 * inf_prod_inv(-1, 4, 4, 1, trunc))
    inner = psi(-(-trunc // 4)).stretch(4, trunc)
    return pre * inner


def omega_theta_side(trunc: int) -> QSeries:
    def pieces():
        for n in _range_while(lambda n: 3 * n * n + 3 * n, trunc):
            for j in range(-n, n + 1):
                s = (-1) ** j
                yield s, 4 * n * n + 3 * n - j * j
                yield -s, 4 * n * n + 5 * n + 1 - j * j
    theta = indefinite_theta(pieces(), 1, trunc)
    return inf_prod_inv(1, 1, 1, 1, trunc) ** 2 * theta


def third_order_theta_side(trunc: int) -> QSeries:
    def pieces():
        for n in _range_while(lambda n: 2 * n * n + 2 * n, trunc):
            for j in range(-n, n + 1):
                s = (-1) ** j
                yield s, 3 * n * n + 2 * n - j * j
                yield -s, 3 * n * n + 4 * n + 1 - j * j
    theta = indefinite_theta(pieces(), 1, trunc)
    return inf_prod(-1, 2, 2, 1, trunc) * inf_prod_inv(1, 2, 2, 1, trunc) * theta


def half_triple_sum(trunc: int) -> QSeries:
    """Half-integer exponents: built on the lattice (1/2)Z, ``trunc`` in half-units."""
    def terms():
        for n1 in _range_while(lambda n: n * n, trunc):
            for n2 in _range_while(lambda n: n * n + n1 * n1, trunc):
                for j in range(1, min(n1, n2) + 1):
                    e = 2 * j * j + n1 * n1 + n2 * n2
                    yield (mono((-1) ** j, e)
                           * den(1, 2, 2, n1 - j) * den(1, 2, 2, n2 - j)
                           * den(1, 2, 2, n1 + n2) * den(1, 2, 2, 2 * j - 1)
                           * num(-1, 1, 2, n1) * num(-1, 1, 2, n2) * num(1, 2, 4, j - 1))
    return sum_terms(terms(), 2, trunc)


def half_theta_side(trunc: int) -> QSeries:
    def pieces():
        # exponents doubled onto the half-integer lattice
        for n in _range_while(lambda n: 2 * (8 * n * n), trunc, 1):
            for j in range(-n, n):
                yield 1, 2 * (10 * n * n - 2 * n - 2 * j * j - 2 * j)
                yield -1, 2 * (10 * n * n + 2 * n - 2 * j * j - 2 * j)
        for n in _range_while(lambda n: 2 * (8 * n * n + 8 * n + 2), trunc):
            for j in range(-n, n + 1):
                yield -1, 2 * (10 * n * n + 8 * n + 2 - 2 * j * j)
                yield 1, 2 * (10 * n * n + 12 * n + 4 - 2 * j * j)
    theta = indefinite_theta(pieces(), 2, trunc)
    pre = inf_prod(-1, 1, 2, 2, trunc) ** 2 * inf_prod_inv(1, 2, 2, 2, trunc) ** 2
    return pre * theta


def psi_theta_side(trunc: int) -> QSeries:
    def pieces():
        for n in _range_while(lambda n: 4 * n * n + 4 * n + 1, trunc):
            for j in range(-n, n + 1):
                yield 1, 5 * n * n + 4 * n + 1 - j * j
                yield -1, 5 * n * n + 6 * n + 2 - j * j
        for n in _range_while(lambda n: 4 * n * n, trunc, 1):
            for j in range(-n, n):
                yield -1, 5 * n * n - n - j * j - j
                yield 1, 5 * n * n + n - j * j - j
    theta = indefinite_theta(pieces(), 1, trunc)
    return inf_prod(-1, 1, 1, 1, trunc) * inf_prod_inv(1, 1, 1, 1, trunc) * theta


def rr_triple_sum(trunc: int) -> QSeries:
    def terms():
        for n1 in _range_while(lambda n: n * n, trunc):
            for n2 in _range_while(lambda n: n * n + n1 * n1, trunc):
                for j in range(min(n1, n2) + 1):
                    yield (mono(1, j * j + n1 * n1 + n2 * n2) * den(1, 1, 1, n1 + n2)
                           * den(1, 1, 1, n1 - j) * den(1, 1, 1, n2 - j) * den(1, 1, 1, j))
    return sum_terms(terms(), 1, trunc)


def rr_printed_product(trunc: int) -> QSeries:
    return triple_poch_infinite(1, 8, 9, 9, 1, trunc) * inf_prod_inv(1, 1, 1, 1, trunc) ** 2


def rr_product(trunc: int) -> QSeries:
    return triple_poch_infinite(4, 5, 9, 9, 1, trunc) * inf_prod_inv(1, 1, 1, 1, trunc) ** 2


def unit2_beta_product(trunc: int, idx: tuple[int, int]) -> QSeries:
    n1, n2 = idx
    t = den(1, 1, 1, n1) * den(1, 1, 1, n1) * den(1, 1, 1, n2) * den(1, 1, 1, n2)
    return t.realize(1, trunc)


def unit2_beta_display(n1: int, n2: int, trunc: int) -> QSeries:
    """1/(q)_{n1+n2} sum_j q^(j^2) / ((q)_{n1-j} (q)_{n2-j} (q)_j^2)."""
    return sum_terms((mono(1, j * j) * den(1, 1, 1, n1 + n2) * den(1, 1, 1, n1 - j)
                      * den(1, 1, 1, n2 - j) * den(1, 1, 1, j) * den(1, 1, 1, j)
                      for j in range(min(n1, n2) + 1)), 1, trunc)


def unit2_beta_sum(trunc: int, idx: tuple[int, int]) -> QSeries:
    return unit2_beta_display(idx[0], idx[1], trunc)


def square_triple_sum(trunc: int) -> QSeries:
    def terms():
        for n1 in _range_while(lambda n: n * n, trunc):
            for n2 in _range_while(lambda n: n * n + n1 * n1, trunc):
                for j in range(min(n1, n2) + 1):
                    yield (mono(1, j * j + n1 * n1 + n2 * n2) * den(1, 1, 1, n1 + n2)
                           * den(1, 1, 1, n1 - j) * den(1, 1, 1, n2 - j)
                           * den(1, 1, 1, j) * den(1, 1, 1, j))
    return sum_terms(terms(), 1, trunc)


def partition_power(k: int, trunc: int) -> QSeries:
    """1/(q)_inf^k."""
    return inf_prod_inv(1, 1, 1, 1, trunc) ** k


def unit4_beta_display(n: tuple[int, int, int, int], trunc: int,
                       _inner: dict | None = None) -> QSeries:
    """The four-index beta written as a triple sum over (i1, i2, j)."""
    n1, n2, n3, n4 = n
    cache = {} if _inner is None else _inner

    def inner(i1: int, i2: int, t: int) -> QSeries:
        # sum_j q^(j^2) / ((q)_{i1+i2} (q)_{i1-j} (q)_{i2-j} (q)_j^2)
        hit = cache.get((i1, i2))
        if hit is None or hit.trunc < t:
            hit = unit2_beta_display(i1, i2, t)
            cache[(i1, i2)] = hit
        return hit.truncate(t)

    terms = QSeries.zero(1, trunc)
    pre = den(1, 1, 1, n1 + n2) * den(1, 1, 1, n3 + n4)
    for i1 in range(min(n1, n2) + 1):
        for i2 in range(min(n3, n4) + 1):
            t = (pre * mono(1, i1 * i1 + i2 * i2) * den(1, 1, 1, n1 - i1) * den(1, 1, 1, n2 - i1)
                 * den(1, 1, 1, n3 - i2) * den(1, 1, 1, n4 - i2))
            if t.shift >= trunc:
                continue
            terms = terms + t.realize(1, trunc, lambda u: inner(i1, i2, u))
    return terms


def fourth_power_sum(trunc: int) -> QSeries:
    cache: dict = {}
    total = QSeries.zero(1, trunc)
    sq = lambda n: n * n
    for n1 in _range_while(sq, trunc):
        for n2 in _range_while(lambda n: sq(n) + sq(n1), trunc):
            for n3 in _range_while(lambda n: sq(n) + sq(n1) + sq(n2), trunc):
                for n4 in _range_while(lambda n: sq(n) + sq(n1) + sq(n2) + sq(n3), trunc):
                    e = sq(n1) + sq(n2) + sq(n3) + sq(n4)
                    idx = (n1, n2, n3, n4)
                    _tally()
                    total = total + mono(1, e).realize(
                        1, trunc, lambda u: unit4_beta_display(idx, u, cache))
    return total


# registry

@dataclass(frozen=True)
class IdentityEntry:
    id: str
    denom: int
    lhs_builder: Callable
    rhs_builder: Callable
    description: str
    default_order: int = 50
    family: tuple[tuple[int, ...], ...] = ()
    annotations: tuple[str, ...] = field(default=())

    def build(self, side: str, trunc: int, index: tuple[int, ...] | None = None) -> QSeries:
        if trunc < 1:
            raise ValueError(f"trunc must be positive, got {trunc}")
        builder = {LHS: self.lhs_builder, RHS: self.rhs_builder}.get(side)
        if builder is None:
            raise ValueError(f"side must be {LHS!r} or {RHS!r}, got {side!r}")
        if self.family:
            if index is None:
                raise ValueError(f"{self.id} is an indexed family; give an index")
            return builder(trunc, tuple(index))
        return builder(trunc)


UNIT2_FAMILY = tuple(itertools.product(range(6), repeat=2))

_ENTRIES = [
    IdentityEntry("thm2-3.1", 1, omega_triple_sum, omega_product_side,
                  "triple sum = (-q)_inf/(q)_inf * sum q^{2n^2+2n}/(-q)_{2n+1}"),
    IdentityEntry("thm2-3.2", 1, nu_triple_sum, nu_product_side,
                  "triple sum with (-q)_{n1}(-q)_{n2} = four-product prefactor * nu-type mock theta"),
    IdentityEntry("thm2-3.3", 1, psi_triple_sum, psi_product_side,
                  "triple sum over base q^2 = product prefactor * psi(q^4)"),
    IdentityEntry("eq-3.9", 1, omega_triple_sum, omega_theta_side,
                  "triple sum = indefinite theta q^{4n^2+3n}(1-q^{2n+1}) sum (-1)^j q^{-j^2} / (q)_inf^2"),
    IdentityEntry("eq-3.10", 1, nu_like, third_order_theta_side,
                  "third-order mock theta = (-q^2;q^2)_inf/(q^2;q^2)_inf * indefinite theta"),
    IdentityEntry("eq-3.11", 2, half_triple_sum, half_theta_side,
                  "half-integer triple sum = (-q^{1/2})_inf^2/(q)_inf^2 * indefinite theta",
                  default_order=100),
    IdentityEntry("eq-3.12", 1, psi, psi_theta_side,
                  "psi(q) = (-q)_inf/(q)_inf * indefinite theta"),
    IdentityEntry("eq-4.1", 1, rr_triple_sum, rr_printed_product,
                  "Rogers-Ramanujan type triple sum = (q,q^8,q^9;q^9)_inf/(q)_inf^2",
                  annotations=(
                      "As printed this fails at q^1 (lhs 2, rhs 1).  The product that verifies is "
                      "(q^4,q^5,q^9;q^9)_inf; see eq-4.1-corrected.",)),
    IdentityEntry("eq-4.1-corrected", 1, rr_triple_sum, rr_product,
                  "same triple sum = (q^4,q^5,q^9;q^9)_inf/(q)_inf^2"),
    IdentityEntry("eq-4.2", 1, unit2_beta_product, unit2_beta_sum,
                  "1/((q)_{n1}^2 (q)_{n2}^2) = 1/(q)_{n1+n2} sum_j q^{j^2}/(...), n1,n2 <= 5",
                  default_order=40, family=UNIT2_FAMILY),
    IdentityEntry("eq-4.7", 1, square_triple_sum, lambda t: partition_power(2, t),
                  "triple sum = 1/(q)_inf^2"),
    IdentityEntry("eq-4.8", 1, fourth_power_sum, lambda t: partition_power(4, t),
                  "seven-index sum = 1/(q)_inf^4", default_order=30),
]

REGISTRY: dict[str, IdentityEntry] = {e.id: e for e in _ENTRIES}


_EVEN_POWER = re.compile(r"even-power-(\d+)$")


def get(id: str) -> IdentityEntry:
    """Registered entry, or ``even-power-M`` built on demand."""
    if id in REGISTRY:
        return REGISTRY[id]
    m = _EVEN_POWER.match(id)
    if m and int(m.group(1)) >= 1:
        return gen_even_power_identity(int(m.group(1)))
    raise UnknownEntry(id)


def build(id: str, side: str, trunc: int, index: tuple[int, ...] | None = None) -> QSeries:
    if id in MOCK_THETA and id not in REGISTRY:
        return MOCK_THETA[id].builder(trunc)
    return get(id).build(side, trunc, index)


def verify_entry(entry: IdentityEntry, trunc: int | None = None) -> VerifyReport:
    """Build both sides and compare every coefficient below ``trunc``."""
    order = entry.default_order if trunc is None else trunc
    start = time.perf_counter()
    box = [0]
    token = _term_count.set(box)

    def report(status, mismatch=None, message=""):
        return VerifyReport(entry.id, order, status, mismatch,
                            (time.perf_counter() - start) * 1000, box[0],
                            message=message, annotations=entry.annotations)

    try:
        for idx in entry.family or (None,):
            lhs = entry.build(LHS, order, idx)
            rhs = entry.build(RHS, order, idx)
            res = equal_up_to(lhs, rhs, order)
            if not res:
                return report(MISMATCH, Mismatch(res.expo_num, entry.denom, res.lhs_coeff,
                                                 res.rhs_coeff, idx))
    except (SeriesError, ValueError) as exc:
        return report(ERROR, message=str(exc))
    finally:
        _term_count.reset(token)
    return report(MATCH)


def verify(id: str, trunc: int | None = None) -> VerifyReport:
    return verify_entry(get(id), trunc)


# Bailey pairs

def _delta(index, trunc: int, denom: int = 1) -> QSeries:
    zero = index == 0 or (isinstance(index, tuple) and not any(index))
    return QSeries.one(denom, trunc) if zero else QSeries.zero(denom, trunc)


def unit_pair() -> OnefoldPair:
    """a = 1, alpha_n = [n = 0], beta_n = 1/(q)_n^2."""
    return OnefoldPair(Mono(1, 0), _delta,
                       lambda n, t: (den(1, 1, 1, n) * den(1, 1, 1, n)).realize(1, t), "unit")


def pentagonal_alpha(n: int, trunc: int) -> QSeries:
    """alpha_0 = 1, alpha_n = (-1)^n q^(n(3n-1)/2) (1 + q^n)."""
    if n == 0:
        return QSeries.one(1, trunc)
    e = n * (3 * n - 1) // 2
    return from_terms(((e, (-1) ** n), (e + n, (-1) ** n)), 1, trunc)


def pentagonal_pair() -> OnefoldPair:
    """a = 1, beta_n = 1/(q)_n."""
    return OnefoldPair(Mono(1, 0), pentagonal_alpha,
                       lambda n, t: den(1, 1, 1, n).realize(1, t), "pentagonal")


def pair_q_alpha(n: int, trunc: int) -> QSeries:
    """q^(n^2) (1-q^(2n+1))/(1-q) sum_{|j|<=n} (-1)^j q^(-j^2)."""
    return from_terms(((n * n - j * j + k, (-1) ** j)
                       for j in range(-n, n + 1) for k in range(2 * n + 1)), 1, trunc)


def pair_q() -> OnefoldPair:
    """Relative to a = q: beta_n = (-1)^n / (q^2;q^2)_n."""
    return OnefoldPair(Mono(1, 1), pair_q_alpha,
                       lambda n, t: (mono((-1) ** n, 0) * den(1, 2, 2, n)).realize(1, t),
                       "pair-q")


def pair_q2_alpha_printed(idx: tuple[int, int], trunc: int) -> QSeries:
    """q^(2n^2+n) (1-q^(2n+1))/(1-q) sum_{|j|<=n} (-1)^j q^(-j^2) on the diagonal."""
    n1, n2 = idx
    if n1 != n2:
        return QSeries.zero(1, trunc)
    n = n1
    return from_terms(((2 * n * n + n - j * j + k, (-1) ** j)
                       for j in range(-n, n + 1) for k in range(2 * n + 1)), 1, trunc)


def pair_q2_beta(idx: tuple[int, int], trunc: int) -> QSeries:
    """1/(q)_{N1+N2+1} sum_j q^(j^2+j) (-1)^j / ((q)_{N1-j} (q)_{N2-j} (q^2;q^2)_j)."""
    N1, N2 = idx
    return sum_terms((mono((-1) ** j, j * j + j) * den(1, 1, 1, N1 + N2 + 1)
                      * den(1, 1, 1, N1 - j) * den(1, 1, 1, N2 - j) * den(1, 2, 2, j)
                      for j in range(min(N1, N2) + 1)), 1, trunc)


def pair_q2_printed() -> MultifoldPair:
    """The two-fold pair exactly as displayed; it is *not* a Bailey pair (see pair_q2)."""
    return MultifoldPair(2, Mono(1, 1), pair_q2_alpha_printed, pair_q2_beta,
                         "pair-q2-printed")


def pair_q2() -> MultifoldPair:
    """Two-fold pair relative to a = q with beta exactly as displayed.

    As displayed, beta carries 1/(q)_{N1+N2+1} where the construction gives
    1/(q^2;q)_{N1+N2} = (1-q)/(q)_{N1+N2+1}.  Keeping the displayed beta
    forces alpha to be the displayed alpha divided by (1-q).
    """
    one_minus_q_inv = ProductTerm(denom=(PochSpec(1, 1, 1, 1),))
    return MultifoldPair(
        2, Mono(1, 1),
        lambda idx, t: one_minus_q_inv.realize(1, t, lambda u: pair_q2_alpha_printed(idx, u)),
        pair_q2_beta, "pair-q2")


def unit2_pair() -> MultifoldPair:
    return MultifoldPair(2, Mono(1, 0), _delta,
                         lambda idx, t: unit2_beta_display(idx[0], idx[1], t), "unit2")


def unit4_pair() -> MultifoldPair:
    cache: dict = {}
    return MultifoldPair(4, Mono(1, 0), _delta,
                         lambda idx, t: unit4_beta_display(idx, t, cache), "unit4")


PAIRS: dict[str, Callable[[], OnefoldPair | MultifoldPair]] = {
    "unit": unit_pair,
    "pair-q": pair_q,
    "pentagonal": pentagonal_pair,
    "pair-q2": pair_q2,
    "pair-q2-printed": pair_q2_printed,
    "unit2": unit2_pair,
    "unit4": unit4_pair,
    "twofold(pair-q)": lambda: bailey.twofold_from_onefold(pair_q()),
    "twofold(unit)": lambda: bailey.twofold_from_onefold(unit_pair()),
    "twofold(pentagonal)": lambda: bailey.twofold_from_onefold(pentagonal_pair()),
    "lift(unit2)": lambda: bailey.theorem1_lift(unit2_pair()),
}


def get_pair(name: str) -> OnefoldPair | MultifoldPair:
    try:
        return PAIRS[name]()
    except KeyError:
        raise UnknownEntry(name) from None


# the 1/(q)_inf^(2M) family

def tensor_pair(p: MultifoldPair, r: MultifoldPair, name: str | None = None) -> MultifoldPair:
    """Concatenate indices; the defining relation factors slot by slot."""
    if p.a != r.a or p.denom != r.denom:
        raise ValueError("tensor product needs a common base and lattice")
    k = p.l
    return MultifoldPair(p.l + r.l, p.a,
                         lambda idx, t: p.alpha(idx[:k], t) * r.alpha(idx[k:], t),
                         lambda idx, t: p.beta(idx[:k], t) * r.beta(idx[k:], t),
                         name or f"{p.name}*{r.name}", p.denom)


def unit_tower(M: int) -> MultifoldPair:
    """An M-fold pair with alpha = delta, built from lifts and tensor products."""
    if M == 1:
        return unit_pair().as_multifold()
    if M % 2 == 0:
        return bailey.theorem1_lift(unit_tower(M // 2), f"unit{M}")
    return tensor_pair(unit_pair().as_multifold(), unit_tower(M - 1), f"unit{M}")


def count_lattice_points(dim: int, trunc: int) -> int:
    """#{n in Z>=0^dim : sum n_i^2 < trunc}."""
    ways = [1] + [0] * (trunc - 1)
    for _ in range(dim):
        nxt = [0] * trunc
        for s, w in enumerate(ways):
            if w:
                n = 0
                while s + n * n < trunc:
                    nxt[s + n * n] += w
                    n += 1
        ways = nxt
    return sum(ways)


def gen_even_power_identity(M: int, max_terms: int = MAX_TERMS,
                            order: int | None = None) -> IdentityEntry:
    """The multi-sum identity for 1/(q)_inf^(2M)."""
    if M < 1:
        raise ValueError(f"M must be at least 1, got {M}")
    if M == 1:
        return REGISTRY["eq-4.7"]
    if M == 2:
        return REGISTRY["eq-4.8"]
    default = 12 if order is None else order
    needed = count_lattice_points(2 * M, default)
    if needed > max_terms:
        raise ValueError(f"M={M} at order {default} needs {needed} outer terms "
                         f"(limit {max_terms}); lower the order or raise the limit")
    pair = bailey.theorem1_lift(unit_tower(M), f"unit{2 * M}")

    def lhs(t: int) -> QSeries:
        res = bailey.multifold_limit_sum(pair, t)
        _tally(res.term_count)
        return res.lhs

    return IdentityEntry(
        f"even-power-{M}", 1, lhs,
        lambda t: partition_power(2 * M, t),
        f"lifted {2 * M}-fold unit pair, all parameters at infinity = 1/(q)_inf^{2 * M}",
        default_order=default)
