"""Executable state machines for the two composition rules.

Both rules iterate a two-player cut-and-choose round over a shrinking active
piece. Under plain chaining (``Rule.VANILLA``) the chooser always carries the
chosen piece into the next round as cutter and the cutter leaves with the
leftover. Under the biggest-player rule (``Rule.BIGGEST_PLAYER``) whoever
holds the weakly larger of the two pieces after the choice (ties to the
cutter) must cut again, and the other player leaves with their piece.

A play-out of an n-player game makes exactly n-1 cuts and allocates one
contiguous piece per player; the allocated pieces plus the active piece tile
the cake at every intermediate state.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .core import Cake, Partition, Piece, frac
from .errors import ConfigurationError, StrategyError, TraceError


class Rule(enum.Enum):
    VANILLA = "vanilla"
    BIGGEST_PLAYER = "bp"

    @classmethod
    def parse(cls, text: str) -> "Rule":
        for rule in cls:
            if rule.value == text:
                return rule
        raise ValueError(f"unknown rule {text!r}; expected 'vanilla' or 'bp'")


class Pick(enum.Enum):
    FIRST = "first"
    SECOND = "second"


@dataclass(frozen=True)
class GameConfig:
    n: int
    cake: Cake = Cake(Fraction(1))
    rule: Rule = Rule.VANILLA

    def __post_init__(self):
        if self.n < 1:
            raise ConfigurationError(f"need at least one player, got n={self.n}")


@dataclass(frozen=True)
class CutContext:
    """What a cutter sees: identity, held size, how many mouths the piece must feed."""

    player: int
    size: Fraction
    sharing: int      # players the held piece still has to cover, holder included
    prior_cuts: int   # cuts this player has already made this game


@dataclass(frozen=True)
class ChoiceContext:
    """What a chooser sees: identity, both offered sizes, players still waiting."""

    player: int
    first: Fraction
    second: Fraction
    entrants_left: int  # players who enter after this chooser


CutPolicy = Callable[[CutContext], Fraction]
ChoicePolicy = Callable[[ChoiceContext], Pick]


@dataclass(frozen=True)
class StrategyProfile:
    """Per-player cut and choice policies."""

    cuts: Mapping[int, CutPolicy]
    choices: Mapping[int, ChoicePolicy]

    def require_players(self, n: int) -> None:
        missing = [p for p in range(1, n + 1) if p not in self.cuts or p not in self.choices]
        if missing:
            raise ConfigurationError(f"profile missing policies for players {missing}")


# --- named policies ---------------------------------------------------------

def halve_cut(ctx: CutContext) -> Fraction:
    return Fraction(1, 2)


def proportional_cut(ctx: CutContext) -> Fraction:
    """Cut off exactly a 1/k slice when k players still share the held piece."""
    return Fraction(1, ctx.sharing)


def choose_bigger(ctx: ChoiceContext) -> Pick:
    return Pick.SECOND if ctx.second > ctx.first else Pick.FIRST


def bp_best_response(ctx: ChoiceContext) -> Pick:
    """Choose by comparing the exit payoff against continuing as next cutter.

    Taking the weakly smaller piece means leaving the game with it; taking the
    strictly larger piece means cutting it again among entrants_left + 1
    players, which under equilibrium continuation is worth max/(entrants+1).
    Exact ties are resolved toward leaving, so the cutter keeps the burden of
    sharing the larger piece.
    """
    a, b = ctx.first, ctx.second
    if ctx.entrants_left == 0 or a == b:
        return choose_bigger(ctx)
    small, big = (a, b) if a < b else (b, a)
    continue_value = big / (ctx.entrants_left + 1)
    if continue_value > small:
        return Pick.FIRST if a > b else Pick.SECOND   # take the big piece, keep cutting
    return Pick.FIRST if a < b else Pick.SECOND       # leave with the small piece


def equilibrium_profile(config: GameConfig) -> StrategyProfile:
    """The mutual-best-response profile for the configured rule.

    Vanilla: every cutter halves, every chooser takes the weakly bigger piece.
    Biggest-player: cutters cut off exactly proportional slices and choosers
    best-respond by backward-induction value, ties toward leaving.
    """
    players = range(1, config.n + 1)
    if config.rule is Rule.VANILLA:
        return StrategyProfile({p: halve_cut for p in players},
                               {p: choose_bigger for p in players})
    return StrategyProfile({p: proportional_cut for p in players},
                           {p: bp_best_response for p in players})


def deviate(profile: StrategyProfile, player: int, alpha: Fraction) -> StrategyProfile:
    """Replace ``player``'s cut at their first cutting opportunity with ``alpha``.

    All later cuts by the same player, and everyone else's behavior, are left
    untouched.
    """
    alpha = frac(alpha)
    if not 0 <= alpha <= 1:
        raise StrategyError(f"deviation cut {alpha} outside [0, 1]")
    base = profile.cuts[player]

    def first_cut_override(ctx: CutContext) -> Fraction:
        return alpha if ctx.prior_cuts == 0 else base(ctx)

    cuts = dict(profile.cuts)
    cuts[player] = first_cut_override
    return StrategyProfile(cuts, dict(profile.choices))


# --- events and traces ------------------------------------------------------

@dataclass(frozen=True)
class CutEvent:
    player: int
    alpha: Fraction
    left: Fraction   # size of the lower-coordinate piece
    right: Fraction


@dataclass(frozen=True)
class ChoiceEvent:
    player: int
    picked: Pick


@dataclass(frozen=True)
class HandoffEvent:
    player: int      # who cuts next


@dataclass(frozen=True)
class ExitEvent:
    player: int
    piece: Piece


@dataclass(frozen=True)
class QueryCounter:
    """Cut and evaluation queries issued during a play-out."""

    cuts: int = 0
    evals: int = 0

    @property
    def total(self) -> int:
        return self.cuts + self.evals


@dataclass(frozen=True)
class GameTrace:
    events: tuple
    partition: Partition
    queries: QueryCounter


@dataclass(frozen=True)
class GameState:
    """Mid-game snapshot: who waits, who holds the active piece, who has exited."""

    remaining: tuple[int, ...]
    holder: int
    piece: Piece
    allocations: tuple[tuple[int, Piece], ...]


def play(config: GameConfig, profile: StrategyProfile) -> tuple[Partition, GameTrace]:
    """Run a full play-out and return the resulting partition and trace.

    Each round the holder cuts the active piece in two, the next entrant
    chooses one, and the rule decides who leaves with which piece and who
    cuts next. Query accounting: the opening cut costs one evaluation (the
    first cutter sizes up the incoming cake) plus one cut; every later cut
    costs just the cut, since the cutter already evaluated that piece when
    choosing or watching it; every choice costs two evaluations.
    """
    profile.require_players(config.n)
    whole = config.cake.whole()
    if config.n == 1:
        partition = Partition(config.cake, ((1, whole),))
        trace = GameTrace((ExitEvent(1, whole),), partition, QueryCounter(0, 0))
        return partition, trace

    state = GameState(tuple(range(2, config.n + 1)), 1, whole, ())
    events: list = []
    cuts = evals = 0
    prior_cuts = {p: 0 for p in range(1, config.n + 1)}

    while state.remaining:
        cutter = state.holder
        chooser = state.remaining[0]
        rest = state.remaining[1:]

        ctx = CutContext(cutter, state.piece.size, 1 + len(state.remaining),
                         prior_cuts[cutter])
        alpha = frac(profile.cuts[cutter](ctx))
        if not 0 <= alpha <= 1:
            raise StrategyError(f"player {cutter} cut at {alpha}, outside [0, 1]")
        lower, upper = state.piece.split_at(alpha)
        prior_cuts[cutter] += 1
        evals += 1 if cuts == 0 else 0
        cuts += 1
        events.append(CutEvent(cutter, alpha, lower.size, upper.size))

        pick = profile.choices[chooser](
            ChoiceContext(chooser, lower.size, upper.size, len(rest)))
        evals += 2
        events.append(ChoiceEvent(chooser, pick))
        chosen, other = (lower, upper) if pick is Pick.FIRST else (upper, lower)

        if not rest:
            # last round: both players leave with their pieces
            events.append(ExitEvent(chooser, chosen))
            events.append(ExitEvent(cutter, other))
            state = GameState((), cutter, other,
                              state.allocations + ((chooser, chosen), (cutter, other)))
            break

        if config.rule is Rule.VANILLA:
            # cutter leaves with the leftover, chooser carries their piece onward
            leaver, left_piece = cutter, other
            carrier, carried = chooser, chosen
        else:
            # weakly larger piece keeps cutting; "weakly" resolves ties to the cutter
            if other.size >= chosen.size:
                leaver, left_piece = chooser, chosen
                carrier, carried = cutter, other
            else:
                leaver, left_piece = cutter, other
                carrier, carried = chooser, chosen
        events.append(ExitEvent(leaver, left_piece))
        events.append(HandoffEvent(carrier))
        state = GameState(rest, carrier, carried,
                          state.allocations + ((leaver, left_piece),))

    partition = Partition(config.cake, state.allocations)
    trace = GameTrace(tuple(events), partition, QueryCounter(cuts, evals))
    return partition, trace


# --- trace serialization ----------------------------------------------------

def _frac_json(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


def _frac_from_json(obj: dict) -> Fraction:
    return Fraction(obj["num"], obj["den"])


def event_to_json(event) -> dict:
    if isinstance(event, CutEvent):
        return {"event": "cut", "player": event.player, "alpha": _frac_json(event.alpha),
                "left": _frac_json(event.left), "right": _frac_json(event.right)}
    if isinstance(event, ChoiceEvent):
        return {"event": "choice", "player": event.player, "picked": event.picked.value}
    if isinstance(event, HandoffEvent):
        return {"event": "handoff", "player": event.player}
    if isinstance(event, ExitEvent):
        return {"event": "exit", "player": event.player,
                "lo": _frac_json(event.piece.lo), "hi": _frac_json(event.piece.hi)}
    raise TraceError(f"unknown event {event!r}")


def trace_to_jsonl(trace: GameTrace) -> str:
    """One JSON object per line, all fractions as {"num": ..., "den": ...}."""
    return "\n".join(json.dumps(event_to_json(e)) for e in trace.events) + "\n"


def replay_jsonl(text: str, cake: Cake) -> Partition:
    """Re-run a serialized event log and rebuild the partition it describes.

    Walks the events against a fresh cake, checking that every cut's reported
    sizes match the geometry and every exited piece was actually on the table.
    Raises TraceError on any inconsistency or if players are left unallocated.
    """
    active = cake.whole()
    offer: tuple[Piece, Piece] | None = None
    allocations: list[tuple[int, Piece]] = []

    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        obj = json.loads(line)
        kind = obj.get("event")
        if kind == "cut":
            if offer is not None:
                raise TraceError(f"line {line_no}: cut while an offer is open")
            alpha = _frac_from_json(obj["alpha"])
            lower, upper = active.split_at(alpha)
            if (lower.size, upper.size) != (_frac_from_json(obj["left"]),
                                            _frac_from_json(obj["right"])):
                raise TraceError(f"line {line_no}: recorded cut sizes disagree with geometry")
            offer = (lower, upper)
        elif kind == "choice":
            if offer is None:
                raise TraceError(f"line {line_no}: choice without an open offer")
        elif kind == "exit":
            piece = Piece(_frac_from_json(obj["lo"]), _frac_from_json(obj["hi"]))
            if offer is not None:
                if piece not in offer:
                    raise TraceError(f"line {line_no}: exited piece {piece} not on the table")
                other = offer[1] if piece == offer[0] else offer[0]
                allocations.append((obj["player"], piece))
                active, offer = other, None
            else:
                if piece != active:
                    raise TraceError(f"line {line_no}: exited piece {piece} != active {active}")
                allocations.append((obj["player"], piece))
        elif kind == "handoff":
            if offer is not None:
                raise TraceError(f"line {line_no}: handoff while an offer is open")
        else:
            raise TraceError(f"line {line_no}: unknown event kind {kind!r}")
    try:
        return Partition(cake, tuple(allocations))
    except ValueError as exc:
        raise TraceError(f"replayed events do not form a partition: {exc}") from exc
