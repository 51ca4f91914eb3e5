"""Closed-form share vectors, Gini formulas, welfare, and query-count totals.

The chained-game equilibrium gives player m the share 2^-m (the last player
keeping 2^-(n-1)), an exponentially unequal vector whose Gini has the exact
closed form (n - 3 + 2^(2-n))/n. The asymptotic formula 2^(1-n) + 1 - 3/n
tracks it closely and tends to the same 1 - 3/n limit; note the asymptotic
formula is an approximation device, not the exact Gini of any share vector
(at n=2 it gives 0 while the true Gini of (1/2, 1/4) is 1/6).
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

from .core import Distribution, gini_rank
from .engines import Rule

# CSV schemas for the emitted figure data.
FIG_GINI_HEADER = ("n", "gini_exact", "gini_asymptotic", "gini_limit")
FIG_PAYOFF_HEADER = ("epsilon_num", "epsilon_den", "payoff_norm_num", "payoff_norm_den", "n")
FIG_POA_HEADER = ("n", "poa_exact", "poa_asymptote")


def vanilla_distribution(n: int) -> Distribution:
    """Equilibrium shares of the plainly chained game: (2^-1, ..., 2^-(n-1), 2^-(n-1))."""
    if n < 2:
        raise ValueError(f"need at least two players, got n={n}")
    shares = [Fraction(1, 2 ** m) for m in range(1, n)]
    shares.append(Fraction(1, 2 ** (n - 1)))
    return Distribution(tuple(shares))


def gini_vanilla_exact(n: int) -> Fraction:
    """Exact Gini of the chained-game equilibrium shares."""
    return gini_rank(vanilla_distribution(n))


def gini_asymptotic(n: int) -> Fraction:
    """Asymptotic Gini formula 2^(1-n) + 1 - 3/n for the idealized shares 2^-i."""
    if n < 2:
        raise ValueError(f"need at least two players, got n={n}")
    return Fraction(1, 2 ** (n - 1)) + 1 - Fraction(3, n)


def gini_limit(n: int) -> Fraction:
    """Large-n limit form 1 - 3/n of the asymptotic Gini."""
    if n < 2:
        raise ValueError(f"need at least two players, got n={n}")
    return 1 - Fraction(3, n)


def gini_idealized_bruteforce(n: int) -> Fraction:
    """Rank-weighted Gini accumulation for the idealized shares (2^-1, ..., 2^-n).

    Accumulates the mean-difference rank sum with reversed zero-based ranks
    (the i-th largest share weighted n-i) against unit total wealth:
    G = 2*sum_i (n-i)*2^-i / n - (n-1)/n. This reproduces the asymptotic
    formula at n=2 and its 1 - 3/n limit, but for n >= 3 the asymptotic
    closed form exceeds the accumulated sum by exactly 2^(1-n)(n-2)/n. The
    sum instead coincides with ``gini_vanilla_exact(n)`` for every n.
    """
    if n < 2:
        raise ValueError(f"need at least two players, got n={n}")
    weighted = sum((n - i) * Fraction(1, 2 ** i) for i in range(1, n + 1))
    return 2 * weighted / n - Fraction(n - 1, n)


@dataclass(frozen=True)
class PoAReport:
    """Best achievable welfare over best equilibrium welfare, W = 1 - G."""

    n: int
    rule: Rule
    optimal_welfare: Fraction
    equilibrium_welfare: Fraction
    poa: Fraction
    asymptote: Fraction


def poa(n: int, rule: Rule) -> PoAReport:
    """Price of anarchy of a composition rule at n players.

    The optimum is the perfectly even split (Gini 0, welfare 1). Chained
    composition pays 1/(1 - G_exact(n)), which grows like n/3; the
    biggest-player rule reaches the even split in equilibrium, so its price
    is exactly 1.
    """
    if n < 2:
        raise ValueError(f"need at least two players, got n={n}")
    if rule is Rule.BIGGEST_PLAYER:
        one = Fraction(1)
        return PoAReport(n, rule, one, one, one, one)
    eq_welfare = 1 - gini_vanilla_exact(n)
    return PoAReport(n, rule, Fraction(1), eq_welfare, 1 / eq_welfare, Fraction(n, 3))


def rw_complexity(n: int) -> int:
    """Total cut-plus-evaluation queries of a full play-out: 4 + 3(n-2).

    The opening two-player round costs 4 (the cutter evaluates the cake and
    cuts, the chooser evaluates both pieces); each added player costs 3 more
    (one cut, two chooser evaluations). Both composition rules hit the same
    totals: routing the cutter role never adds queries.
    """
    if n < 2:
        raise ValueError(f"need at least two players, got n={n}")
    return 4 + 3 * (n - 2)


def decimal_string(x: Fraction, digits: int = 12) -> str:
    """Decimal rendering of an exact rational, correctly rounded to ``digits`` significant digits."""
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(x.numerator) / Decimal(x.denominator))


def gini_table(n_max: int, n_min: int = 2) -> list[tuple[int, Fraction, Fraction, Fraction]]:
    """Rows (n, exact, asymptotic, limit) for the Gini-versus-players figure."""
    return [(n, gini_vanilla_exact(n), gini_asymptotic(n), gini_limit(n))
            for n in range(n_min, n_max + 1)]


def poa_table(n_max: int, n_min: int = 2,
              rule: Rule = Rule.VANILLA) -> list[tuple[int, Fraction, Fraction]]:
    """Rows (n, poa, asymptote) for the price-of-anarchy figure."""
    rows = []
    for n in range(n_min, n_max + 1):
        report = poa(n, rule)
        rows.append((n, report.poa, report.asymptote))
    return rows
