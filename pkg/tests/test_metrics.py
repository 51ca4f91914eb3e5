"""Closed-form distributions, Gini formulas, price of anarchy, query totals."""

from decimal import Decimal
from fractions import Fraction as F

import pytest

from cakecut import (
    Cake,
    GameConfig,
    Rule,
    equilibrium_profile,
    gini_asymptotic,
    gini_idealized_bruteforce,
    gini_limit,
    gini_pairwise,
    gini_rank,
    gini_vanilla_exact,
    play,
    poa,
    rw_complexity,
    vanilla_distribution,
)
from cakecut.metrics import decimal_string, gini_table, poa_table


# --- the chained-equilibrium share vector -------------------------------------

def test_vanilla_distribution_small_cases():
    assert vanilla_distribution(2).shares == (F(1, 2), F(1, 2))
    assert vanilla_distribution(4).shares == (F(1, 2), F(1, 4), F(1, 8), F(1, 8))


def test_vanilla_distribution_sums_to_one():
    for n in range(2, 16):
        assert vanilla_distribution(n).total == 1


def test_vanilla_distribution_requires_two_players():
    with pytest.raises(ValueError):
        vanilla_distribution(1)


def test_vanilla_distribution_matches_engine_play():
    for n in range(2, 13):
        cfg = GameConfig(n, Cake(F(1)), Rule.VANILLA)
        partition, _ = play(cfg, equilibrium_profile(cfg))
        assert partition.sizes() == vanilla_distribution(n).shares


# --- exact and asymptotic Gini ---------------------------------------------------

def test_gini_vanilla_exact_values():
    assert gini_vanilla_exact(2) == 0
    assert gini_vanilla_exact(6) == F(49, 96)


def test_gini_vanilla_exact_closed_form():
    # (n - 3 + 2^(2-n)) / n, cross-checked against the pairwise definition
    for n in range(2, 16):
        closed = (F(n - 3) + F(1, 2 ** (n - 2))) / n
        assert gini_vanilla_exact(n) == closed
        assert gini_pairwise(vanilla_distribution(n)) == closed


def test_gini_vanilla_exact_is_monotone_toward_one():
    values = [gini_vanilla_exact(n) for n in range(3, 13)]
    assert all(a < b for a, b in zip(values, values[1:]))
    assert values[-1] > F(7, 10)
    assert all(v < 1 for v in values)


def test_gini_asymptotic_values():
    assert gini_asymptotic(3) == F(1, 4)
    assert gini_asymptotic(6) == F(17, 32)
    assert gini_asymptotic(2) == 0


def test_gini_limit_form():
    for n in range(2, 21):
        assert gini_limit(n) == 1 - F(3, n)
    assert gini_asymptotic(50) - gini_limit(50) == F(1, 2 ** 49)


def test_asymptotic_approaches_exact():
    gaps = [abs(gini_vanilla_exact(n) - gini_asymptotic(n)) for n in range(3, 13)]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    # the gap has the exact closed form 2^(1-n) (n-2)/n
    for n in range(3, 13):
        assert gaps[n - 3] == F(n - 2, n) / 2 ** (n - 1)


# --- the idealized rank accumulation ------------------------------------------------

def test_bruteforce_two_players_is_zero():
    # the reversed zero-based ranking scores (1/2, 1/4) as perfectly equal;
    # the true Gini of that vector is 1/6 (ranking convention artifact)
    assert gini_idealized_bruteforce(2) == 0
    assert gini_rank([F(1, 2), F(1, 4)]) == F(1, 6)


def test_bruteforce_agrees_with_asymptotic_only_at_two():
    assert gini_idealized_bruteforce(2) == gini_asymptotic(2)
    for n in range(3, 21):
        gap = gini_asymptotic(n) - gini_idealized_bruteforce(n)
        assert gap == F(n - 2, n) / 2 ** (n - 1)
        assert gap > 0


def test_bruteforce_coincides_with_vanilla_exact():
    for n in range(2, 21):
        assert gini_idealized_bruteforce(n) == gini_vanilla_exact(n)


# --- price of anarchy ----------------------------------------------------------------

def test_poa_bp_is_free():
    for n in range(2, 21):
        report = poa(n, Rule.BIGGEST_PLAYER)
        assert report.poa == 1
        assert report.asymptote == 1
        assert report.equilibrium_welfare == 1


def test_poa_vanilla_six_players():
    report = poa(6, Rule.VANILLA)
    assert report.optimal_welfare == 1
    assert report.equilibrium_welfare == F(47, 96)
    assert report.poa == F(96, 47)
    assert report.asymptote == 2


def test_poa_identity_and_ratio():
    for n in range(2, 21):
        report = poa(n, Rule.VANILLA)
        assert report.poa == 1 / (1 - gini_vanilla_exact(n))
        assert report.poa >= 1
        if n >= 6:
            assert abs(report.poa / report.asymptote - 1) <= F(15, 100)


def test_poa_ratio_tends_to_one():
    ratios = [poa(n, Rule.VANILLA).poa / F(n, 3) for n in range(6, 21)]
    assert all(abs(r - 1) > abs(s - 1) for r, s in zip(ratios, ratios[1:]))


def test_poa_requires_two_players():
    with pytest.raises(ValueError):
        poa(1, Rule.VANILLA)


# --- query totals ----------------------------------------------------------------------

def test_rw_complexity_values():
    assert rw_complexity(2) == 4
    assert rw_complexity(3) == 7
    assert rw_complexity(7) == 19
    with pytest.raises(ValueError):
        rw_complexity(1)


# --- decimal rendering and figure tables ----------------------------------------------

def test_decimal_string_known_values():
    assert decimal_string(F(49, 96)) == "0.510416666667"
    assert decimal_string(F(1, 2)) == "0.5"
    assert decimal_string(F(96, 47)) == "2.04255319149"
    assert decimal_string(F(0)) == "0"
    assert decimal_string(F(1)) == "1"


def test_decimal_string_is_a_faithful_rounding():
    for x in (F(49, 96), F(17, 32), F(2519, 30240), F(-7, 13), F(123456, 7)):
        rendered = Decimal(decimal_string(x))
        exact = Decimal(x.numerator) / Decimal(x.denominator)  # 28-digit context
        assert abs(rendered - exact) <= Decimal("5e-12") * abs(exact)


def test_gini_table_row_six():
    rows = {n: (e, a, lim) for n, e, a, lim in gini_table(8)}
    assert rows[6] == (F(49, 96), F(17, 32), F(1, 2))


def test_poa_table_matches_reports():
    for n, value, asymptote in poa_table(10):
        report = poa(n, Rule.VANILLA)
        assert (value, asymptote) == (report.poa, report.asymptote)
