"""Backward-induction values, grid-based deviation certification, payoff curves.

The strategy space of a cutter is the full interval [0, 1] of cut fractions;
certification discretizes it to a grid {0, 1/L, ..., 1} with L chosen so that
every exact proportional cut is on-grid. All payoffs are exact rationals, so
"no profitable deviation" is decided by exact comparison, never by tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterator, Optional

from .core import Cake, frac
from .engines import (
    CutEvent,
    GameConfig,
    Rule,
    StrategyProfile,
    bp_best_response,
    choose_bigger,
    deviate,
    equilibrium_profile,
    play,
)
from .errors import DomainError, GridError


@dataclass(frozen=True)
class Grid:
    """Candidate cut fractions {0, 1/L, 2/L, ..., 1}."""

    resolution: int

    def __post_init__(self):
        if self.resolution < 2 or self.resolution % 2:
            raise GridError(f"grid resolution must be even and >= 2 to contain 1/2, "
                            f"got {self.resolution}")

    def fractions(self) -> Iterator[Fraction]:
        for i in range(self.resolution + 1):
            yield Fraction(i, self.resolution)

    def require_multiple_of(self, k: int) -> None:
        if k > 1 and self.resolution % k:
            raise GridError(f"grid resolution {self.resolution} is not divisible by {k}; "
                            f"exact proportional cuts would fall off-grid")


DEFAULT_GRID = Grid(2520)  # lcm(2..9): proportional cuts for up to 9 players stay on-grid


# Unit-cake value tables per grid resolution, grown on demand. Values scale
# linearly with the held piece, so only the piece-relative table is stored.
# Reads are safe to share across threads once a resolution is warmed up.
_UNIT_VALUES: dict[int, list] = {}
_UNIT_BEST: dict[int, list] = {}


def _unit_tables(grid: Grid, k: int) -> tuple[list, list]:
    values = _UNIT_VALUES.setdefault(grid.resolution, [None, Fraction(1)])
    bests = _UNIT_BEST.setdefault(grid.resolution, [None, None])
    while len(values) <= k:
        prev = values[-1]
        best_value = None
        best_alpha = None
        for alpha in grid.fractions():
            small, big = (alpha, 1 - alpha) if alpha <= 1 - alpha else (1 - alpha, alpha)
            continuation = big * prev
            # chooser grabs the big piece when continuing beats leaving with the
            # small one; on exact ties the chooser leaves and the cutter carries on
            cutter_gets = small if continuation > small else continuation
            if best_value is None or cutter_gets > best_value:
                best_value, best_alpha = cutter_gets, alpha
        values.append(best_value)
        bests.append(best_alpha)
    return values, bests


def backward_induction(s, k: int, grid: Grid = DEFAULT_GRID) -> tuple[Fraction, Optional[Fraction]]:
    """Value of holding a piece of size ``s`` with ``k`` players left (self included).

    Returns (value, best opening cut). With one player left the value is the
    piece itself and there is no cut. Otherwise the holder picks the grid cut
    maximizing their own continuation against a best-responding chooser; when
    the resolution is divisible by k the value is exactly s/k and the best cut
    is the proportional one (or its mirror).
    """
    if k < 1:
        raise ValueError(f"need at least one player, got k={k}")
    s = frac(s)
    if s < 0:
        raise DomainError(f"piece size must be nonnegative, got {s}")
    values, bests = _unit_tables(grid, k)
    return s * values[k], bests[k]


@dataclass(frozen=True)
class PlayerDeviation:
    """Best unilateral cut deviation found for one player.

    ``best_alpha`` is None when the player never cuts under the profile, in
    which case cut deviations cannot change the play-out at all.
    ``best_effective_delta`` is the largest payoff change among deviations
    that actually alter the player's realized cut sizes (the mirror cut
    1 - alpha produces the same sizes and counts as no deviation).
    """

    player: int
    best_alpha: Optional[Fraction]
    best_delta: Fraction
    best_effective_delta: Optional[Fraction]


@dataclass(frozen=True)
class NashCertificate:
    rule: Rule
    n: int
    grid_resolution: int
    baseline_shares: tuple[Fraction, ...]
    deviations: tuple[PlayerDeviation, ...]

    NO_PROFITABLE_DEVIATION = "no-profitable-deviation"
    DEVIATION_FOUND = "deviation-found"

    @property
    def verdict(self) -> str:
        if all(d.best_delta <= 0 for d in self.deviations):
            return self.NO_PROFITABLE_DEVIATION
        return self.DEVIATION_FOUND


def _best_response_choosers(config: GameConfig, profile: StrategyProfile) -> StrategyProfile:
    """Swap every choice policy for the rule's best response.

    Deviation payoffs are judged against choosers who actually react to the
    realized sizes, not against frozen scripted choices.
    """
    response = choose_bigger if config.rule is Rule.VANILLA else bp_best_response
    return StrategyProfile(dict(profile.cuts),
                           {p: response for p in range(1, config.n + 1)})


def certify_nash(config: GameConfig, profile: StrategyProfile,
                 grid: Grid = DEFAULT_GRID) -> NashCertificate:
    """Search every on-grid unilateral first-cut deviation for a payoff gain.

    For each player in turn, their first cut is replaced by every grid
    fraction while everyone else's policies stay fixed and all choosers best
    respond to the sizes they actually see. The certificate records each
    player's most profitable deviation. Players who never cut under the
    profile keep a zero delta: changing an action that is never taken cannot
    move the outcome.
    """
    grid.require_multiple_of(lcm(*range(2, config.n + 1)) if config.n >= 2 else 1)
    eval_profile = _best_response_choosers(config, profile)
    base_partition, base_trace = play(config, eval_profile)
    base_sizes = base_partition.sizes()

    first_cut: dict[int, Fraction] = {}
    for event in base_trace.events:
        if isinstance(event, CutEvent) and event.player not in first_cut:
            first_cut[event.player] = event.alpha

    records = []
    for player in range(1, config.n + 1):
        base_alpha = first_cut.get(player)
        if base_alpha is None:
            records.append(PlayerDeviation(player, None, Fraction(0), None))
            continue
        best_alpha = base_alpha
        best_delta = Fraction(0)
        best_effective = None
        for alpha in grid.fractions():
            deviated, _ = play(config, deviate(eval_profile, player, alpha))
            delta = deviated.piece_of(player).size - base_sizes[player - 1]
            if delta > best_delta:
                best_alpha, best_delta = alpha, delta
            if alpha != base_alpha and alpha != 1 - base_alpha:
                if best_effective is None or delta > best_effective:
                    best_effective = delta
        records.append(PlayerDeviation(player, best_alpha, best_delta, best_effective))

    return NashCertificate(config.rule, config.n, grid.resolution,
                           base_sizes, tuple(records))


def first_cut_payoff(n: int, eps) -> Fraction:
    """Normalized payoff of the opening cutter after cutting (1/n + eps, rest).

    The opening cut is perturbed by ``eps``; everyone plays the biggest-player
    equilibrium afterwards. The cutter's final piece is divided by 1/n, so the
    value at eps = 0 is exactly 1.
    """
    if n < 2:
        raise ValueError(f"need at least two players, got n={n}")
    eps = frac(eps)
    alpha = Fraction(1, n) + eps
    if not 0 <= alpha <= 1:
        raise DomainError(f"deviation {eps} pushes a piece size below zero")
    config = GameConfig(n, Cake(Fraction(1)), Rule.BIGGEST_PLAYER)
    profile = deviate(equilibrium_profile(config), 1, alpha)
    partition, _ = play(config, profile)
    return partition.piece_of(1).size * n


def payoff_curve(n: int, grid: Grid = DEFAULT_GRID,
                 eps_lo=None, eps_hi=None) -> list[tuple[Fraction, Fraction]]:
    """Sampled (eps, normalized payoff) pairs for opening-cut deviations.

    The default window is eps in [-1/(2n), 1/(2n)], inside which the perturbed
    slice stays on the same side of the halving point; there the curve is a
    tent with its unique maximum 1 at eps = 0, falling with slope n on the
    left and slope n/(n-1) on the right. Wider explicit windows are allowed
    up to the full strategy space (cutting beta and 1-beta yield identical
    sizes, so past the halving point the curve mirrors itself and the peak
    recurs at eps = (n-2)/n).
    """
    if n < 2:
        raise ValueError(f"need at least two players, got n={n}")
    lo = -Fraction(1, 2 * n) if eps_lo is None else frac(eps_lo)
    hi = Fraction(1, 2 * n) if eps_hi is None else frac(eps_hi)
    if lo > hi:
        raise DomainError(f"empty deviation window [{lo}, {hi}]")
    if lo < -Fraction(1, n) or hi > Fraction(n - 1, n):
        raise DomainError(f"window [{lo}, {hi}] leaves the strategy space "
                          f"[-1/{n}, {n - 1}/{n}]")
    points = []
    for alpha in grid.fractions():
        eps = alpha - Fraction(1, n)
        if lo <= eps <= hi:
            points.append((eps, first_cut_payoff(n, eps)))
    return points
