"""Exact cake geometry, valuations, fairness predicates, and inequality statistics.

Everything in this module is computed with `fractions.Fraction`; there is no
floating point anywhere. Comparisons such as "weakly larger piece" and
"exactly proportional" are therefore decidable, which the game engines and
the equilibrium certifier rely on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import DegenerateInputError, DomainError

FractionLike = Union[Fraction, int, str]


def frac(value: FractionLike) -> Fraction:
    """Coerce ints, Fractions, and 'p/q' strings to Fraction. Floats are rejected."""
    if isinstance(value, float):
        raise TypeError(f"refusing float {value!r}; pass an exact fraction like '1/3'")
    return Fraction(value)


@dataclass(frozen=True)
class Piece:
    """Half-open interval [lo, hi) of cake, in cake coordinates."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", frac(self.lo))
        object.__setattr__(self, "hi", frac(self.hi))
        if self.lo < 0 or self.hi < self.lo:
            raise DomainError(f"invalid piece [{self.lo}, {self.hi})")

    @property
    def size(self) -> Fraction:
        return self.hi - self.lo

    def split_at(self, alpha: Fraction) -> tuple["Piece", "Piece"]:
        """Cut at lo + alpha*size; returns (lower piece, upper piece)."""
        alpha = frac(alpha)
        if not 0 <= alpha <= 1:
            raise DomainError(f"cut fraction {alpha} outside [0, 1]")
        mid = self.lo + alpha * self.size
        return Piece(self.lo, mid), Piece(mid, self.hi)

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi})"


@dataclass(frozen=True)
class Cake:
    """The full resource: the interval [0, size)."""

    size: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "size", frac(self.size))
        if self.size <= 0:
            raise DomainError(f"cake size must be positive, got {self.size}")

    def whole(self) -> Piece:
        return Piece(Fraction(0), self.size)


@dataclass(frozen=True)
class Valuation:
    """Piecewise-constant density on [0, cake_size).

    ``density`` is an ordered tuple of (breakpoint, height) pairs; the first
    breakpoint must be 0, breakpoints strictly increase, and each height holds
    up to the next breakpoint (the last one up to ``cake_size``). The value of
    a piece is the integral of the density over it, so it is finitely additive
    over disjoint pieces.
    """

    cake_size: Fraction
    density: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        object.__setattr__(self, "cake_size", frac(self.cake_size))
        segs = tuple((frac(b), frac(h)) for b, h in self.density)
        object.__setattr__(self, "density", segs)
        if self.cake_size <= 0:
            raise DomainError("cake size must be positive")
        if not segs or segs[0][0] != 0:
            raise DomainError("density must start at breakpoint 0")
        for (b0, h0), (b1, _) in zip(segs, segs[1:]):
            if b1 <= b0:
                raise DomainError("density breakpoints must strictly increase")
        if segs[-1][0] >= self.cake_size:
            raise DomainError("density breakpoints must lie inside the cake")
        if any(h < 0 for _, h in segs):
            raise DomainError("density heights must be nonnegative")

    @classmethod
    def uniform(cls, cake_size: FractionLike = 1) -> "Valuation":
        """Lebesgue measure: the single-segment density of height 1."""
        return cls(frac(cake_size), ((Fraction(0), Fraction(1)),))

    @property
    def total(self) -> Fraction:
        """Value of the whole cake."""
        return self.value(Piece(Fraction(0), self.cake_size))

    def value(self, piece: Piece) -> Fraction:
        if piece.hi > self.cake_size:
            raise DomainError(f"piece {piece} extends past the cake [0, {self.cake_size})")
        bounds = [b for b, _ in self.density] + [self.cake_size]
        acc = Fraction(0)
        for (start, height), end in zip(self.density, bounds[1:]):
            lo = max(piece.lo, start)
            hi = min(piece.hi, end)
            if hi > lo:
                acc += height * (hi - lo)
        return acc


def measure(valuation: Valuation, piece: Piece) -> Fraction:
    """Value of ``piece`` under ``valuation`` (integral of the density)."""
    return valuation.value(piece)


@dataclass(frozen=True)
class Partition:
    """Assignment of one contiguous piece per player, tiling the cake exactly.

    ``assignments`` maps player ids 1..n to pieces; pieces must be pairwise
    disjoint and their sorted union must cover [0, cake.size) with no gaps.
    """

    cake: Cake
    assignments: tuple[tuple[int, Piece], ...]

    def __post_init__(self):
        pairs = tuple(sorted(((p, pc) for p, pc in self.assignments), key=lambda kv: kv[0]))
        object.__setattr__(self, "assignments", pairs)
        players = [p for p, _ in pairs]
        if players != list(range(1, len(players) + 1)):
            raise DomainError(f"player ids must be exactly 1..n, got {players}")
        cursor = Fraction(0)
        for piece in sorted((pc for _, pc in pairs), key=lambda q: (q.lo, q.hi)):
            if piece.lo != cursor:
                raise DomainError(f"pieces do not tile the cake: gap or overlap at {piece.lo}")
            cursor = piece.hi
        if cursor != self.cake.size:
            raise DomainError(f"pieces cover [0, {cursor}), cake is [0, {self.cake.size})")

    @property
    def n(self) -> int:
        return len(self.assignments)

    def piece_of(self, player: int) -> Piece:
        for p, piece in self.assignments:
            if p == player:
                return piece
        raise KeyError(player)

    def sizes(self) -> tuple[Fraction, ...]:
        """Piece sizes in player order 1..n."""
        return tuple(piece.size for _, piece in self.assignments)


def fair_partition(cake: Cake, n: int) -> Partition:
    """Split the cake into n equal contiguous pieces with cuts at i*|C|/n.

    This is the benchmark allocation a coordinator could impose directly: its
    share vector has Gini 0, i.e. welfare 1.
    """
    if n < 1:
        raise ValueError(f"need at least one player, got n={n}")
    step = cake.size / n
    pieces = tuple((i + 1, Piece(i * step, (i + 1) * step)) for i in range(n))
    return Partition(cake, pieces)


@dataclass(frozen=True)
class Distribution:
    """Vector of nonnegative shares, at least one positive."""

    shares: tuple[Fraction, ...]

    def __post_init__(self):
        shares = tuple(frac(s) for s in self.shares)
        object.__setattr__(self, "shares", shares)
        if not shares:
            raise ValueError("distribution must contain at least one share")
        if any(s < 0 for s in shares):
            raise DomainError(f"shares must be nonnegative, got {shares}")
        if all(s == 0 for s in shares):
            raise DegenerateInputError("all-zero distribution has no defined Gini")

    @property
    def n(self) -> int:
        return len(self.shares)

    @property
    def total(self) -> Fraction:
        return sum(self.shares, Fraction(0))


ShareInput = Union[Distribution, Sequence[FractionLike]]


def as_distribution(shares: ShareInput) -> Distribution:
    if isinstance(shares, Distribution):
        return shares
    return Distribution(tuple(frac(s) for s in shares))


def _value_matrix(partition, valuations) -> list[list[Fraction]]:
    """V[i][j] = value player i+1 assigns to player j+1's piece; V[i][n] = V_i(C)."""
    if isinstance(partition, Partition):
        if valuations is None:
            valuations = [Valuation.uniform(partition.cake.size)] * partition.n
        if len(valuations) != partition.n:
            raise ValueError(
                f"{partition.n} players but {len(valuations)} valuations"
            )
        pieces = [piece for _, piece in partition.assignments]
        return [[v.value(q) for q in pieces] + [v.total] for v in valuations]
    if valuations is not None:
        raise ValueError("valuations only apply to a full Partition, not a share vector")
    d = as_distribution(partition)
    row = list(d.shares) + [d.total]
    return [row[:] for _ in range(d.n)]


def is_proportional(partition, valuations=None) -> bool:
    """True iff every player values their own piece at >= 1/n of the whole.

    Accepts a ``Partition`` plus per-player valuations, or a bare share
    vector which is judged under the shared uniform valuation.
    """
    mat = _value_matrix(partition, valuations)
    n = len(mat)
    return all(n * mat[i][i] >= mat[i][n] for i in range(n))


def is_envy_free(partition, valuations=None) -> bool:
    """True iff no player values another player's piece above their own."""
    mat = _value_matrix(partition, valuations)
    n = len(mat)
    return all(mat[i][i] >= mat[i][j] for i in range(n) for j in range(n))


def is_equitable(partition, valuations=None) -> bool:
    """True iff all players assign the same value to their own pieces."""
    mat = _value_matrix(partition, valuations)
    n = len(mat)
    return all(mat[i][i] == mat[0][0] for i in range(n))


def pareto_dominates(y, x, valuations=None) -> bool:
    """True iff allocation ``y`` makes someone strictly better off and nobody worse.

    Both arguments must be of the same kind: two Partitions (judged under
    ``valuations``) or two share vectors (judged under the uniform valuation).
    """
    if isinstance(y, Partition) != isinstance(x, Partition):
        raise ValueError("cannot compare a Partition against a bare share vector")
    if isinstance(y, Partition):
        my = _value_matrix(y, valuations)
        mx = _value_matrix(x, valuations)
        if len(my) != len(mx):
            raise ValueError(f"player counts differ: {len(my)} vs {len(mx)}")
        ys = [my[i][i] for i in range(len(my))]
        xs = [mx[i][i] for i in range(len(mx))]
    else:
        ys = list(as_distribution(y).shares)
        xs = list(as_distribution(x).shares)
        if len(ys) != len(xs):
            raise ValueError(f"share counts differ: {len(ys)} vs {len(xs)}")
    return all(a >= b for a, b in zip(ys, xs)) and any(a > b for a, b in zip(ys, xs))


def gini_pairwise(shares: ShareInput) -> Fraction:
    """Gini coefficient as the relative mean absolute difference of shares.

    G = sum_i sum_j |d_i - d_j| / (2 n sum_k d_k). Zero for perfect equality,
    (n-1)/n when one player holds everything.
    """
    d = as_distribution(shares).shares
    n = len(d)
    total = sum(d, Fraction(0))
    spread = sum(abs(a - b) for a in d for b in d)
    return spread / (2 * n * total)


def gini_rank(shares: ShareInput) -> Fraction:
    """Gini coefficient via the sorted-rank identity.

    Sorting shares ascending, G = 2*sum_i i*d_(i) / (n sum d) - (n+1)/n.
    Agrees exactly with ``gini_pairwise`` on every input.
    """
    d = sorted(as_distribution(shares).shares)
    n = len(d)
    total = sum(d, Fraction(0))
    weighted = sum(i * s for i, s in enumerate(d, start=1))
    return Fraction(2) * weighted / (n * total) - Fraction(n + 1, n)


def welfare(shares: ShareInput) -> Fraction:
    """Egalitarian welfare of a share vector: W = 1 - G."""
    return 1 - gini_rank(shares)
