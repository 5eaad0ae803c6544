import itertools
import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbailey import bailey, catalog
from qbailey.bailey import (
    INFINITY,
    FiniteMonomial,
    InverseQPower,
    Mono,
    MultifoldPair,
    OnefoldPair,
    check_multifold,
    check_onefold,
    lemma_eval,
    multifold_limit_sum,
    theorem1_lift,
    twofold_from_onefold,
    twofold_lemma_eval,
)
from qbailey.products import PochSpec, poch, poch_reciprocal
from qbailey.series import QSeries, SeriesError, equal_up_to

from oracles import expand_product


def qs(*c, t=10):
    return QSeries(c, 1, t)


ONE_MINUS_Q = lambda t: QSeries((1, -1), 1, t)


# defining relation

def test_unit_pair_relation():
    assert check_onefold(catalog.unit_pair(), 6, 40).ok


def test_pair_q_relation():
    assert check_onefold(catalog.pair_q(), 8, 40).ok


def test_pentagonal_pair_relation():
    assert check_onefold(catalog.pentagonal_pair(), 8, 40).ok


def test_n_max_zero_checks_beta0_only():
    r = check_onefold(catalog.pair_q(), 0, 20)
    assert r.ok and r.term_count == 1


def test_broken_pair_reports_index():
    good = catalog.pair_q()
    bad = OnefoldPair(good.a, good.alpha,
                      lambda n, t: good.beta(n, t) + (QSeries((0, 0, 1), 1, t) if n == 2 else 0),
                      "broken")
    r = check_onefold(bad, 4, 20)
    assert not r.ok
    assert r.first_mismatch.index == (2,)
    assert r.first_mismatch.expo_num == 2


@pytest.mark.parametrize("name,n_max", [("unit2", 4), ("pair-q2", 4), ("twofold(pair-q)", 4),
                                        ("twofold(unit)", 4), ("twofold(pentagonal)", 3)])
def test_twofold_pairs(name, n_max):
    assert check_multifold(catalog.get_pair(name), n_max, 30).ok


def test_fourfold_pairs():
    assert check_multifold(catalog.unit4_pair(), 2, 30).ok
    assert check_multifold(catalog.get_pair("lift(unit2)"), 2, 30).ok


def test_printed_twofold_pair_is_off_by_one_minus_q():
    # the literal display fails at the very first index ...
    r = check_multifold(catalog.pair_q2_printed(), 2, 20)
    assert not r.ok and r.first_mismatch.index == (0, 0)
    # ... and the machine pair is exactly (1-q) times the normalized one
    machine = twofold_from_onefold(catalog.pair_q())
    hand = catalog.pair_q2()
    for idx in itertools.product(range(5), repeat=2):
        assert machine.beta(idx, 25) == hand.beta(idx, 25) * ONE_MINUS_Q(25)
        assert machine.alpha(idx, 25) == hand.alpha(idx, 25) * ONE_MINUS_Q(25)
        assert machine.alpha(idx, 25) == catalog.pair_q2_alpha_printed(idx, 25)


def test_twofold_of_unit_is_unit2():
    machine = twofold_from_onefold(catalog.unit_pair())
    hand = catalog.unit2_pair()
    for idx in itertools.product(range(5), repeat=2):
        assert machine.beta(idx, 25) == hand.beta(idx, 25)
        assert machine.alpha(idx, 25) == hand.alpha(idx, 25)
        # both equal 1/((q)_n1^2 (q)_n2^2)
        assert hand.beta(idx, 25) == catalog.unit2_beta_product(25, idx)


def test_lift_of_unit2_is_unit4():
    machine = theorem1_lift(catalog.unit2_pair())
    hand = catalog.unit4_pair()
    for idx in itertools.product(range(3), repeat=4):
        assert machine.beta(idx, 20) == hand.beta(idx, 20)
        assert machine.alpha(idx, 20) == hand.alpha(idx, 20)


def test_lift_alpha_vanishes_off_diagonal():
    lifted = theorem1_lift(catalog.pair_q().as_multifold())
    for idx in itertools.product(range(4), repeat=2):
        if idx[0] != idx[1]:
            assert lifted.alpha(idx, 20).is_zero()
    assert not lifted.alpha((2, 2), 20).is_zero()


def _pair_from_alpha(a: Mono, alphas: dict) -> OnefoldPair:
    """beta computed straight from the defining relation with poch expansions."""
    D = 1
    c = a.expo_num + D

    def aq(n, t):
        return poch_reciprocal(PochSpec(a.sign, c, D, n), D, t)

    def q(n, t):
        return poch_reciprocal(PochSpec(1, D, D, n), D, t)

    def alpha(n, t):
        return QSeries(alphas.get(n, ()), D, t)

    def beta(n, t):
        total = QSeries.zero(D, t)
        for r in range(n + 1):
            total = total + alpha(r, t) * aq(n + r, t) * q(n - r, t)
        return total

    return OnefoldPair(a, alpha, beta, "random")


@settings(max_examples=12, deadline=None)
@given(st.sampled_from([Mono(1, 0), Mono(1, 1), Mono(-1, 1)]),
       st.dictionaries(st.integers(0, 3), st.lists(st.integers(-4, 4), min_size=1, max_size=4),
                       max_size=3))
def test_lift_of_random_pair_is_a_pair(a, alphas):
    pair = _pair_from_alpha(a, alphas)
    assert check_onefold(pair, 3, 14).ok
    assert check_multifold(twofold_from_onefold(pair), 3, 14).ok


# lemma

def test_infinity_weight_is_limit_of_inverse_q_power():
    # (rho;q)_n rho^-n at rho = q^-K, expanded as a polynomial, agrees with
    # (-1)^n q^(n(n-1)/2) modulo q^K, for K growing
    for n in range(5):
        limit = bailey.infinity_weight(n, Mono(1, 0), 1).realize(1, 60)
        for K in (8, 15, 30, 60):
            # (q^-K;q)_n q^(Kn) = prod_k (q^K - q^k)
            factors = []
            for k in range(n):
                f = [0] * (max(K, k) + 1)
                f[K] += 1
                f[k] -= 1
                factors.append(f)
            direct = (expand_product(factors) + [0] * K)[:K]
            assert list(limit.truncate(K)) == direct
            via_finite = bailey._slot_factor(FiniteMonomial(1, -K), n, 1).realize(1, K)
            assert list(via_finite) == direct


@pytest.mark.parametrize("rho1,rho2", [
    (FiniteMonomial(-1, 1), INFINITY),
    (InverseQPower(3), INFINITY),
    (InverseQPower(2), InverseQPower(3)),
    (INFINITY, INFINITY),
    (FiniteMonomial(-1, 0), FiniteMonomial(-1, 1)),
    (FiniteMonomial(1, -1), FiniteMonomial(-1, 1)),
    (FiniteMonomial(-1, -1), INFINITY),
    (FiniteMonomial(1, -2), INFINITY),
])
def test_lemma_balances_for_pair_q(rho1, rho2):
    lhs, rhs = lemma_eval(catalog.pair_q(), rho1, rho2, 40)
    assert equal_up_to(lhs, rhs, 40)


@pytest.mark.parametrize("pair", ["unit", "pentagonal"])
@pytest.mark.parametrize("rho1,rho2", [
    (FiniteMonomial(-1, 0), INFINITY),
    (FiniteMonomial(-1, -1), INFINITY),
    (InverseQPower(4), InverseQPower(1)),
    (INFINITY, INFINITY),
])
def test_lemma_balances_a_equals_one(pair, rho1, rho2):
    lhs, rhs = lemma_eval(catalog.get_pair(pair), rho1, rho2, 30)
    assert equal_up_to(lhs, rhs, 30)


def test_lemma_rho_minus_q_left_side_is_direct_sum():
    res = lemma_eval(catalog.pair_q(), FiniteMonomial(-1, 1), INFINITY, 40)
    # sum (-q)_n (-1)^n q^(n(n+1)/2) beta_n with beta_n = 1/(q^2;q^2)_n, summed by hand
    direct = QSeries.zero(1, 40)
    for n in range(9):
        e = n * (n + 1) // 2
        w = poch(PochSpec(-1, 1, 1, n), 1, 40) * poch_reciprocal(PochSpec(1, 2, 2, n), 1, 40)
        direct = direct + w.shift(e, (-1) ** n)
    assert res.lhs == direct
    assert res.lhs == res.rhs


@pytest.mark.parametrize("pair,rho1,rho2", [
    # aq/(rho1 rho2) = 1 puts (1;q)_inf in a denominator
    ("pair-q", FiniteMonomial(-1, 1), FiniteMonomial(-1, 1)),
    # aq/rho1 = -1 gives the factor 1/(1+1), not defined over Z
    ("unit", FiniteMonomial(-1, 1), INFINITY),
    ("unit", FiniteMonomial(1, -1), FiniteMonomial(-1, 1)),
])
def test_singular_specializations_are_errors(pair, rho1, rho2):
    with pytest.raises(SeriesError):
        lemma_eval(catalog.get_pair(pair), rho1, rho2, 20)


def test_degenerate_rho_q_to_the_zero():
    res = lemma_eval(catalog.pair_q(), InverseQPower(0), INFINITY, 30)
    assert res.term_count == 1
    assert res.lhs == QSeries.one(1, 30) == res.rhs


def test_inverse_power_matches_finite_monomial():
    pair = catalog.pair_q()
    for N in range(5):
        a = lemma_eval(pair, InverseQPower(N), INFINITY, 30)
        b = lemma_eval(pair, FiniteMonomial(1, -N), INFINITY, 30)
        assert a.lhs == b.lhs and a.rhs == b.rhs
        a = lemma_eval(pair, InverseQPower(N), InverseQPower(2), 30)
        b = lemma_eval(pair, FiniteMonomial(1, -N), FiniteMonomial(1, -2), 30)
        assert a.lhs == b.lhs and a.rhs == b.rhs


def test_inverse_powers_give_twofold_beta():
    pair = catalog.pair_q()
    two = twofold_from_onefold(pair)
    for N1, N2 in [(2, 3), (1, 1), (0, 4)]:
        res = lemma_eval(pair, InverseQPower(N1), InverseQPower(N2), 40)
        # lhs = (q)_N1 (q)_N2 (aq)_{N1+N2} beta_{N1,N2}
        scale = (poch(PochSpec(1, 1, 1, N1), 1, 40) * poch(PochSpec(1, 1, 1, N2), 1, 40)
                 * poch(PochSpec(1, 2, 1, N1 + N2), 1, 40))
        assert res.lhs == scale * two.beta((N1, N2), 40)
        assert res.rhs == res.lhs


def test_nonterminating_specialization_is_an_error():
    # rho1 = rho2 = q^3 with a = 1: aq/(rho1 rho2) = q^-5, the sum never stops
    with pytest.raises(SeriesError):
        lemma_eval(catalog.unit_pair(), FiniteMonomial(1, 3), FiniteMonomial(1, 3), 10)


def test_negative_combined_exponent_is_an_error():
    # rho1 = q^2, rho2 = q^2, a = 1: weight (q^2)_n^2 q^(-3n); n = 1 has exponent -3
    with pytest.raises(SeriesError):
        lemma_eval(catalog.unit_pair(), FiniteMonomial(1, 2), FiniteMonomial(1, 2), 10)


def test_half_integer_lemma():
    # unit pair at D = 2 with rho1 = -q^(1/2), rho2 -> infinity
    t = lambda n, tr: poch_reciprocal(PochSpec(1, 2, 2, n), 2, tr)
    pair = OnefoldPair(Mono(1, 0), lambda n, tr: QSeries.one(2, tr) if n == 0 else QSeries.zero(2, tr),
                       lambda n, tr: t(n, tr) * t(n, tr), "unit-half", denom=2)
    res = lemma_eval(pair, FiniteMonomial(-1, 1), INFINITY, 40)
    assert equal_up_to(res.lhs, res.rhs, 40)
    assert res.lhs[1] != 0  # genuinely uses the half-integer lattice


# two-fold lemma and multi-sums

def test_twofold_lemma_all_infinite_gives_omega_theta_identity():
    res = twofold_lemma_eval(catalog.pair_q2(), INFINITY, INFINITY, INFINITY, INFINITY,
                             Mono(1, 1), Mono(1, 1), trunc=40)
    assert res.lhs == catalog.omega_triple_sum(40)
    assert res.rhs == catalog.omega_theta_side(40)


def test_twofold_lemma_minus_q_gives_nu_identity():
    x = FiniteMonomial(-1, 1)
    res = twofold_lemma_eval(catalog.pair_q2(), x, INFINITY, x, INFINITY, trunc=40)
    assert res.lhs == catalog.nu_triple_sum(40)
    assert res.rhs == catalog.nu_product_side(40)


def test_twofold_lemma_rejects_wrong_base():
    with pytest.raises(ValueError):
        twofold_lemma_eval(catalog.pair_q2(), INFINITY, INFINITY, INFINITY, INFINITY,
                           Mono(1, 0), Mono(1, 0), trunc=10)


def test_twofold_lemma_mixed_slots_balance():
    res = twofold_lemma_eval(catalog.pair_q2(), InverseQPower(2), INFINITY,
                             FiniteMonomial(-1, 1), INFINITY, trunc=30)
    assert equal_up_to(res.lhs, res.rhs, 30)


def test_multifold_limit_sums():
    r2 = multifold_limit_sum(catalog.unit2_pair(), 40)
    assert r2.lhs == catalog.square_triple_sum(40) == r2.rhs
    r4 = multifold_limit_sum(catalog.unit4_pair(), 25)
    assert r4.lhs == catalog.fourth_power_sum(25) == r4.rhs == catalog.partition_power(4, 25)


def test_delta_alpha_gives_bare_prefactor():
    r = multifold_limit_sum(catalog.unit2_pair(), 20)
    assert r.rhs == poch_reciprocal(PochSpec(1, 1, 1, None), 1, 20) ** 2


def test_pentagonal_twofold_gives_corrected_rr_product():
    r = multifold_limit_sum(twofold_from_onefold(catalog.pentagonal_pair()), 40)
    assert r.lhs == catalog.rr_triple_sum(40)
    assert r.rhs == catalog.rr_product(40)


# memoization

def test_memo_truncates_cached_values():
    calls = []

    def f(n, t):
        calls.append(t)
        return QSeries(range(1, t + 1), 1, t)

    m = bailey.Memo(f)
    assert m(0, 10) == QSeries(range(1, 11), 1, 10)
    assert m(0, 4) == QSeries(range(1, 5), 1, 4)
    assert calls == [10]
    m(0, 12)
    assert calls == [10, 12]


def test_pair_shared_across_threads():
    pair = catalog.unit4_pair()
    expected = {idx: catalog.unit4_beta_display(idx, 15) for idx in itertools.product(range(3), repeat=4)}
    errors = []

    def work():
        for idx in expected:
            if pair.beta(idx, 15) != expected[idx]:
                errors.append(idx)

    threads = [threading.Thread(target=work) for _ in range(6)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
