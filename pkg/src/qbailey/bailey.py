"""Bailey pairs, the Bailey lemma and the pair-doubling construction.

Pair sequences are callables ``f(index, trunc) -> QSeries`` where ``index``
is an int (one-fold) or a tuple (multi-fold).  They are wrapped in
:class:`Memo`, which keeps the most precise value computed per index and
truncates it for cheaper requests.  ``Memo`` guards its dict with a lock, so
pairs may be shared across threads; two threads racing on the same index may
both compute it, and both results are equal.

The base parameter ``a`` and every finite lemma parameter are monomials
``sign * q^(expo_num/D)``.  The exponent may be negative while a term is
being assembled; it has to be nonnegative once all monomials of a term are
combined.
"""

from __future__ import annotations

import itertools
import threading
import time
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence, Union

from .products import INF, PochSpec, ProductTerm, poch_term
from .report import MATCH, MISMATCH, Mismatch, VerifyReport
from .series import QSeries, SeriesError, equal_up_to


class Mono(NamedTuple):
    """``sign * q^(expo_num/D)``."""

    sign: int
    expo_num: int

    def __mul__(self, other: Mono) -> Mono:
        return Mono(self.sign * other.sign, self.expo_num + other.expo_num)

    def __truediv__(self, other: Mono) -> Mono:
        return Mono(self.sign * other.sign, self.expo_num - other.expo_num)

    def power(self, n: int) -> ProductTerm:
        return ProductTerm(self.sign ** n, self.expo_num * n)


class Memo:
    def __init__(self, fn: Callable[[object, int], QSeries]):
        self.fn = fn
        self._cache: dict = {}
        self._lock = threading.Lock()

    def __call__(self, index, trunc: int) -> QSeries:
        with self._lock:
            hit = self._cache.get(index)
        if hit is not None and hit.trunc >= trunc:
            return hit if hit.trunc == trunc else hit.truncate(trunc)
        value = self.fn(index, trunc)
        with self._lock:
            cur = self._cache.get(index)
            if cur is None or cur.trunc < value.trunc:
                self._cache[index] = value
        return value


def memo(fn) -> Memo:
    return fn if isinstance(fn, Memo) else Memo(fn)


@dataclass(frozen=True)
class OnefoldPair:
    a: Mono
    alpha: Callable[[int, int], QSeries]
    beta: Callable[[int, int], QSeries]
    name: str
    denom: int = 1

    def __post_init__(self):
        object.__setattr__(self, "alpha", memo(self.alpha))
        object.__setattr__(self, "beta", memo(self.beta))

    def as_multifold(self) -> MultifoldPair:
        return MultifoldPair(1, self.a, lambda idx, t: self.alpha(idx[0], t),
                             lambda idx, t: self.beta(idx[0], t), self.name, self.denom)


@dataclass(frozen=True)
class MultifoldPair:
    l: int
    a: Mono
    alpha: Callable[[tuple, int], QSeries]
    beta: Callable[[tuple, int], QSeries]
    name: str
    denom: int = 1

    def __post_init__(self):
        if self.l < 1:
            raise ValueError(f"fold count must be at least 1, got {self.l}")
        object.__setattr__(self, "alpha", memo(self.alpha))
        object.__setattr__(self, "beta", memo(self.beta))


# lemma parameter specializations

@dataclass(frozen=True)
class FiniteMonomial:
    sign: int
    expo_num: int

    @property
    def mono(self) -> Mono:
        return Mono(self.sign, self.expo_num)


@dataclass(frozen=True)
class InverseQPower:
    """rho = q^-N; the lemma sum stops at n = N."""

    N: int

    def __post_init__(self):
        if self.N < 0:
            raise ValueError(f"N must be nonnegative, got {self.N}")


@dataclass(frozen=True)
class InfinityLimit:
    pass


RhoSpec = Union[FiniteMonomial, InverseQPower, InfinityLimit]
INFINITY = InfinityLimit()


def _aq(a: Mono, denom: int) -> Mono:
    return Mono(a.sign, a.expo_num + denom)


def aq_poch(a: Mono, n: int | None, denom: int, reciprocal: bool = False) -> ProductTerm:
    """``(aq;q)_n`` or its reciprocal."""
    c = _aq(a, denom)
    return poch_term(c.sign, c.expo_num, denom, n, reciprocal)


def q_poch_inv(n: int, denom: int) -> ProductTerm:
    """``1/(q;q)_n``, vanishing for negative ``n``."""
    if n < 0:
        return ProductTerm(coeff=0)
    return ProductTerm(denom=(PochSpec(1, denom, denom, n),))


def infinity_weight(n: int, c: Mono, denom: int) -> ProductTerm:
    """Limit of ``(rho;q)_n (c/rho)^n`` as rho -> infinity: ``(-1)^n q^(n(n-1)/2) c^n``."""
    return ProductTerm((-1) ** n, denom * n * (n - 1) // 2) * c.power(n)


def _slot_factor(rho: RhoSpec, n: int, denom: int) -> ProductTerm:
    """``(rho;q)_n * rho^-n``, the per-parameter piece of the lemma weight."""
    if isinstance(rho, InfinityLimit):
        return infinity_weight(n, Mono(1, 0), denom)
    if isinstance(rho, InverseQPower):
        if n > rho.N:
            return ProductTerm(coeff=0)
        # (q^-N;q)_n q^(Nn) = (-1)^n q^(n(n-1)/2) (q^(N-n+1);q)_n
        return ProductTerm((-1) ** n, denom * n * (n - 1) // 2,
                           (PochSpec(1, denom * (rho.N - n + 1), denom, n),) if n else ())
    m = rho.mono
    return poch_term(m.sign, m.expo_num, denom, n) * ProductTerm(m.sign ** n, -m.expo_num * n)


def _rho_mono(rho: RhoSpec) -> Mono | None:
    if isinstance(rho, InfinityLimit):
        return None
    if isinstance(rho, InverseQPower):
        return Mono(1, -rho.N)
    return rho.mono


def _ratio_poch(a: Mono, rho: RhoSpec, n: int | None, denom: int,
                reciprocal: bool = False) -> ProductTerm:
    """``(aq/rho;q)_n``; identically 1 for rho -> infinity."""
    r = _rho_mono(rho)
    if r is None:
        return ProductTerm()
    c = _aq(a, denom) / r
    return poch_term(c.sign, c.expo_num, denom, n, reciprocal)


def lemma_weight(a: Mono, rho1: RhoSpec, rho2: RhoSpec, n: int, denom: int) -> ProductTerm:
    """``(rho1)_n (rho2)_n (aq/(rho1 rho2))^n`` with limits applied."""
    return (_slot_factor(rho1, n, denom) * _slot_factor(rho2, n, denom)
            * _aq(a, denom).power(n))


def lemma_alpha_factor(a: Mono, rho1: RhoSpec, rho2: RhoSpec, n: int, denom: int) -> ProductTerm:
    """``1/((aq/rho1)_n (aq/rho2)_n)`` on the alpha side."""
    return (_ratio_poch(a, rho1, n, denom, reciprocal=True)
            * _ratio_poch(a, rho2, n, denom, reciprocal=True))


def lemma_prefactor(a: Mono, rho1: RhoSpec, rho2: RhoSpec, denom: int) -> ProductTerm:
    """``(aq/rho1)_inf (aq/rho2)_inf / ((aq)_inf (aq/(rho1 rho2))_inf)``."""
    out = (_ratio_poch(a, rho1, INF, denom) * _ratio_poch(a, rho2, INF, denom)
           * aq_poch(a, INF, denom, reciprocal=True))
    r1, r2 = _rho_mono(rho1), _rho_mono(rho2)
    if r1 is not None and r2 is not None:
        c = _aq(a, denom) / (r1 * r2)
        out = out * poch_term(c.sign, c.expo_num, denom, INF, reciprocal=True)
    return out


def _slot_range(a: Mono, rho1: RhoSpec, rho2: RhoSpec, denom: int, limit: int) -> list[int]:
    """Indices n whose weight can reach an exponent below ``limit``.

    The scan stops once the weight exponent is at or past ``limit`` with
    positive first and nonnegative second difference (it is quadratic in n
    from some point on), or once the weight vanishes identically.
    """
    def shift(n: int) -> int:
        return lemma_weight(a, rho1, rho2, n, denom).shift

    out = []
    n = 0
    while True:
        w = lemma_weight(a, rho1, rho2, n, denom)
        if w.coeff == 0:
            # (1;q)_n or (q^-N;q)_n with n > N: zero from here on
            return out
        s0 = w.shift
        if s0 < limit:
            out.append(n)
        else:
            s1, s2 = shift(n + 1), shift(n + 2)
            if s1 > s0 and s2 - s1 >= s1 - s0:
                return out
        n += 1
        if n > 4 * max(limit, 0) + 64:
            raise SeriesError(
                f"lemma sum does not terminate for rho1={rho1}, rho2={rho2}, a={a}")


@dataclass
class LemmaResult:
    lhs: QSeries
    rhs: QSeries
    term_count: int = 0

    def __iter__(self):
        return iter((self.lhs, self.rhs))


def multifold_lemma_eval(pair: MultifoldPair, slots: Sequence[tuple[RhoSpec, RhoSpec]],
                         trunc: int) -> LemmaResult:
    """Both sides of the l-fold Bailey lemma, one (rho, rho') couple per slot.

    Every slot uses the pair's common base ``a``.
    """
    if len(slots) != pair.l:
        raise ValueError(f"{pair.name} is {pair.l}-fold but {len(slots)} slots were given")
    D, a = pair.denom, pair.a

    first = [_slot_range(a, r1, r2, D, trunc) for r1, r2 in slots]
    mins = [min((lemma_weight(a, r1, r2, n, D).shift for n in ns), default=0)
            for (r1, r2), ns in zip(slots, first)]
    neg = sum(min(m, 0) for m in mins)
    ranges = []
    for i, (r1, r2) in enumerate(slots):
        slack = neg - min(mins[i], 0)
        ranges.append(first[i] if slack == 0 else _slot_range(a, r1, r2, D, trunc - slack))
    weights = [{n: lemma_weight(a, r1, r2, n, D) for n in ns}
               for (r1, r2), ns in zip(slots, ranges)]
    mins = [min((w.shift for w in ws.values()), default=0) for ws in weights]

    lhs = QSeries.zero(D, trunc)
    rhs_sum = QSeries.zero(D, trunc)
    count = 0
    suffix = [sum(mins[i:]) for i in range(len(mins) + 1)]

    def walk(i: int, idx: tuple, acc: ProductTerm):
        nonlocal lhs, rhs_sum, count
        if i == len(slots):
            if acc.shift >= trunc:
                return
            count += 1
            lhs = lhs + acc.realize(D, trunc, lambda t: pair.beta(idx, t))
            r1s = ProductTerm()
            for (r1, r2), n in zip(slots, idx):
                r1s = r1s * lemma_alpha_factor(a, r1, r2, n, D)
            rhs_sum = rhs_sum + (acc * r1s).realize(D, trunc, lambda t: pair.alpha(idx, t))
            return
        for n, w in weights[i].items():
            nxt = acc * w
            if nxt.shift + suffix[i + 1] >= trunc:
                continue
            walk(i + 1, idx + (n,), nxt)

    walk(0, (), ProductTerm())
    pre = ProductTerm()
    for r1, r2 in slots:
        pre = pre * lemma_prefactor(a, r1, r2, D)
    rhs = pre.realize(D, trunc, lambda t: rhs_sum.truncate(t))
    return LemmaResult(lhs, rhs, count)


def lemma_eval(pair: OnefoldPair, rho1: RhoSpec, rho2: RhoSpec, trunc: int) -> LemmaResult:
    """Both sides of the Bailey lemma for a one-fold pair."""
    return multifold_lemma_eval(pair.as_multifold(), [(rho1, rho2)], trunc)


def twofold_lemma_eval(pair: MultifoldPair, x: RhoSpec, y: RhoSpec, z: RhoSpec, w: RhoSpec,
                       a1: Mono | None = None, a2: Mono | None = None,
                       trunc: int = 1) -> LemmaResult:
    """Two-fold lemma: (x, y) act on the first index, (z, w) on the second."""
    if pair.l != 2:
        raise ValueError(f"{pair.name} is {pair.l}-fold, expected 2")
    for given in (a1, a2):
        if given is not None and Mono(*given) != pair.a:
            raise ValueError(f"{pair.name} is relative to a={pair.a}, not {given}")
    return multifold_lemma_eval(pair, [(x, y), (z, w)], trunc)


def multifold_limit_sum(pair: MultifoldPair, trunc: int) -> LemmaResult:
    """All lemma parameters sent to infinity in every slot."""
    return multifold_lemma_eval(pair, [(INFINITY, INFINITY)] * pair.l, trunc)


# defining relation

def _relation_rhs(pair: MultifoldPair, idx: tuple, trunc: int) -> QSeries:
    D, a = pair.denom, pair.a
    total = QSeries.zero(D, trunc)
    for r in itertools.product(*(range(n + 1) for n in idx)):
        al = pair.alpha(r, trunc)
        if al.is_zero():
            continue
        term = ProductTerm()
        for n, ri in zip(idx, r):
            term = term * aq_poch(a, n + ri, D, reciprocal=True) * q_poch_inv(n - ri, D)
        total = total + term.realize(D, trunc, lambda t: al.truncate(t))
    return total


def check_multifold(pair: MultifoldPair, n_max: int, trunc: int) -> VerifyReport:
    """Check beta against the alpha-sum on every index in ``[0, n_max]^l``."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    start = time.perf_counter()
    count = 0
    for idx in itertools.product(range(n_max + 1), repeat=pair.l):
        count += 1
        lhs = pair.beta(idx, trunc)
        rhs = _relation_rhs(pair, idx, trunc)
        res = equal_up_to(lhs, rhs, trunc)
        if not res:
            ms = (time.perf_counter() - start) * 1000
            return VerifyReport(pair.name, trunc, MISMATCH,
                                Mismatch(res.expo_num, pair.denom, res.lhs_coeff,
                                         res.rhs_coeff, idx), ms, count)
    return VerifyReport(pair.name, trunc, MATCH, None,
                        (time.perf_counter() - start) * 1000, count)


def check_onefold(pair: OnefoldPair, n_max: int, trunc: int) -> VerifyReport:
    return check_multifold(pair.as_multifold(), n_max, trunc)


# constructions

def theorem1_lift(pair: MultifoldPair, name: str | None = None) -> MultifoldPair:
    """Double an l-fold pair into a 2l-fold pair.

    alpha is supported on indices (r1, r1, r2, r2, ...), where it equals
    ``q^(sum r^2) a^(sum r) alpha_r``.  beta carries the prefactor
    ``1/prod (aq)_{n_(2i-1)+n_(2i)}`` and an inner sum over the old indices.
    """
    D, a, l = pair.denom, pair.a, pair.l

    def weight(r: Sequence[int]) -> ProductTerm:
        return ProductTerm(a.sign ** sum(r), D * sum(x * x for x in r) + a.expo_num * sum(r))

    def alpha(idx: tuple, trunc: int) -> QSeries:
        r = idx[0::2]
        if r != idx[1::2]:
            return QSeries.zero(D, trunc)
        return weight(r).realize(D, trunc, lambda t: pair.alpha(r, t))

    def beta(idx: tuple, trunc: int) -> QSeries:
        pre = ProductTerm()
        for i in range(l):
            pre = pre * aq_poch(a, idx[2 * i] + idx[2 * i + 1], D, reciprocal=True)
        bounds = [min(idx[2 * i], idx[2 * i + 1]) for i in range(l)]
        total = QSeries.zero(D, trunc)
        for r in itertools.product(*(range(b + 1) for b in bounds)):
            term = pre * weight(r)
            if term.shift >= trunc:
                continue
            for i, ri in enumerate(r):
                term = term * q_poch_inv(idx[2 * i] - ri, D) * q_poch_inv(idx[2 * i + 1] - ri, D)
            total = total + term.realize(D, trunc, lambda t: pair.beta(r, t))
        return total

    return MultifoldPair(2 * l, a, alpha, beta, name or f"lift({pair.name})", D)


def twofold_from_onefold(pair: OnefoldPair, name: str | None = None) -> MultifoldPair:
    """The two-fold pair obtained by putting rho_i = q^-N_i in the lemma."""
    return theorem1_lift(pair.as_multifold(), name or f"twofold({pair.name})")


def scale_pair(pair: MultifoldPair, factor: ProductTerm, name: str | None = None) -> MultifoldPair:
    """Multiply alpha and beta by the same fixed series; the relation is linear."""
    D = pair.denom
    return MultifoldPair(
        pair.l, pair.a,
        lambda idx, t: factor.realize(D, t, lambda u: pair.alpha(idx, u)),
        lambda idx, t: factor.realize(D, t, lambda u: pair.beta(idx, u)),
        name or f"scaled({pair.name})", D)
