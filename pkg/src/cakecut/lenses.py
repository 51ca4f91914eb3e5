"""Minimal lens layer: forward play maps, backward response maps, composition.

A lens pairs a forward map X -> Y with a backward map (X, R) -> S. Composing
two lenses runs the forwards left to right and threads the downstream
feedback back through the upstream backward map. The cake game instantiates
the wires at offer pairs going forward and a binary choice (0 = first piece,
1 = second) going backward; payoffs are assigned by the state bookkeeping,
not passed along the backward wire.

Play state is threaded through the forward direction as an immutable record,
so a full n-player game is literally the sequential composition of 2(n-1)
cut and choose units. Query accounting matches the engine: the opening cut
unit charges one evaluation plus the cut, later cut units charge only the
cut (their cutter already sized up the piece when choosing or watching it),
and every choose unit charges two evaluations.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import reduce
from typing import Callable, Optional

from .core import Partition, Piece, frac
from .engines import (
    ChoiceContext,
    ChoiceEvent,
    CutContext,
    CutEvent,
    ExitEvent,
    GameConfig,
    GameTrace,
    HandoffEvent,
    Pick,
    QueryCounter,
    Rule,
    StrategyProfile,
)
from .errors import CompositionError, StrategyError, TraceError


@dataclass(frozen=True)
class Lens:
    forward: Callable
    backward: Callable
    src: Optional[str] = None  # optional interface tags, checked on composition
    dst: Optional[str] = None


identity_lens = Lens(lambda x: x, lambda x, r: r)


def compose_seq(g1: Lens, g2: Lens) -> Lens:
    """Sequential composition: g1 then g2.

    Forward is g2.forward after g1.forward; backward feeds g2's feedback into
    g1's backward map, evaluated at g1's own input.
    """
    if g1.dst is not None and g2.src is not None and g1.dst != g2.src:
        raise CompositionError(f"cannot compose: {g1.dst!r} output into {g2.src!r} input")

    def forward(x):
        return g2.forward(g1.forward(x))

    def backward(x, r):
        return g1.backward(x, g2.backward(g1.forward(x), r))

    return Lens(forward, backward, g1.src, g2.dst)


@dataclass(frozen=True)
class PlayState:
    """Forward-threaded game record for the composed pipeline."""

    rule: Rule
    remaining: tuple[int, ...]
    holder: int
    piece: Optional[Piece]                      # set while a piece is held
    offer: Optional[tuple[Piece, Piece]]        # set while an offer is open
    allocations: tuple[tuple[int, Piece], ...] = ()
    events: tuple = ()
    cuts: int = 0
    evals: int = 0


def initial_state(config: GameConfig) -> PlayState:
    return PlayState(config.rule, tuple(range(2, config.n + 1)), 1,
                     config.cake.whole(), None)


def _cuts_by(state: PlayState, player: int) -> int:
    return sum(1 for e in state.events if isinstance(e, CutEvent) and e.player == player)


def make_cut_unit(player: Optional[int], policy) -> Lens:
    """Lens whose forward splits the held piece per the cut policy.

    ``player`` fixes the cutter; ``None`` reads the cutter off the state,
    which is how the biggest-player wiring feeds the cutter identity forward.
    The backward map passes the downstream choice bit through unchanged.
    """

    def forward(state: PlayState) -> PlayState:
        if state.piece is None:
            raise CompositionError("cut unit needs a held piece, found an open offer")
        cutter = state.holder if player is None else player
        if cutter != state.holder:
            raise CompositionError(f"cut unit wired for player {cutter}, "
                                   f"but player {state.holder} holds the piece")
        ctx = CutContext(cutter, state.piece.size, 1 + len(state.remaining),
                         _cuts_by(state, cutter))
        alpha = frac(policy(ctx))
        if not 0 <= alpha <= 1:
            raise StrategyError(f"player {cutter} cut at {alpha}, outside [0, 1]")
        lower, upper = state.piece.split_at(alpha)
        return replace(
            state,
            piece=None,
            offer=(lower, upper),
            events=state.events + (CutEvent(cutter, alpha, lower.size, upper.size),),
            cuts=state.cuts + 1,
            evals=state.evals + (1 if state.cuts == 0 else 0),
        )

    return Lens(forward, lambda state, r: r, src="held", dst="offer")


def make_choose_unit(player: int, policy) -> Lens:
    """Lens whose forward resolves an open offer via the choice policy.

    The chooser takes one piece; the rule then decides who leaves with what
    and who holds next. The backward map reports the chooser's own bit
    (0 = first piece, 1 = second) to the upstream unit.
    """

    def decide(state: PlayState) -> Pick:
        lower, upper = state.offer
        return policy(ChoiceContext(player, lower.size, upper.size,
                                    len(state.remaining) - 1))

    def forward(state: PlayState) -> PlayState:
        if state.offer is None:
            raise CompositionError("choose unit needs an open offer, found a held piece")
        if not state.remaining or state.remaining[0] != player:
            raise CompositionError(f"choose unit wired for player {player}, "
                                   f"but {state.remaining[:1]} is next to enter")
        pick = decide(state)
        lower, upper = state.offer
        chosen, other = (lower, upper) if pick is Pick.FIRST else (upper, lower)
        rest = state.remaining[1:]
        events = state.events + (ChoiceEvent(player, pick),)
        evals = state.evals + 2

        if not rest:
            events += (ExitEvent(player, chosen), ExitEvent(state.holder, other))
            return replace(state, remaining=(), piece=None, offer=None,
                           allocations=state.allocations + ((player, chosen),
                                                            (state.holder, other)),
                           events=events, evals=evals)

        if state.rule is Rule.VANILLA:
            carrier, carried = player, chosen
            leaver, left_piece = state.holder, other
        elif other.size >= chosen.size:
            carrier, carried = state.holder, other
            leaver, left_piece = player, chosen
        else:
            carrier, carried = player, chosen
            leaver, left_piece = state.holder, other
        events += (ExitEvent(leaver, left_piece), HandoffEvent(carrier))
        return replace(state, remaining=rest, holder=carrier, piece=carried,
                       offer=None,
                       allocations=state.allocations + ((leaver, left_piece),),
                       events=events, evals=evals)

    def backward(state: PlayState, r) -> int:
        return 1 if decide(state) is Pick.SECOND else 0

    return Lens(forward, backward, src="offer", dst="held")


def _dispatch_cut(profile: StrategyProfile):
    return lambda ctx: profile.cuts[ctx.player](ctx)


def game_units(config: GameConfig, profile: StrategyProfile) -> list[Lens]:
    """The 2(n-1) primitive lenses of the n-player game, in play order."""
    profile.require_players(config.n)
    units: list[Lens] = []
    for round_no, entrant in enumerate(range(2, config.n + 1), start=1):
        if config.rule is Rule.VANILLA:
            # under plain chaining the round's cutter is statically known
            units.append(make_cut_unit(round_no, profile.cuts[round_no]))
        else:
            units.append(make_cut_unit(None, _dispatch_cut(profile)))
        units.append(make_choose_unit(entrant, profile.choices[entrant]))
    return units


def vanilla_player_unit(player: int, profile: StrategyProfile) -> Lens:
    """A player's choose-then-cut block: offer in, new offer out."""
    return compose_seq(make_choose_unit(player, profile.choices[player]),
                       make_cut_unit(player, profile.cuts[player]))


def compose_game(config: GameConfig, profile: StrategyProfile) -> Lens:
    return reduce(compose_seq, game_units(config, profile))


def play_composed(config: GameConfig, profile: StrategyProfile) -> tuple[Partition, GameTrace]:
    """Play the game through the composed lens pipeline.

    Returns the same (partition, trace) pair as the direct engine; the two
    implementations must agree bit for bit on every input.
    """
    profile.require_players(config.n)
    if config.n == 1:
        whole = config.cake.whole()
        partition = Partition(config.cake, ((1, whole),))
        return partition, GameTrace((ExitEvent(1, whole),), partition, QueryCounter(0, 0))
    pipeline = compose_game(config, profile)
    start = initial_state(config)
    final = pipeline.forward(start)
    # drive the backward pass with a closing response, as the outer context does
    pipeline.backward(start, 1)
    partition = Partition(config.cake, final.allocations)
    trace = GameTrace(final.events, partition, QueryCounter(final.cuts, final.evals))
    return partition, trace


def count_queries(trace: GameTrace) -> QueryCounter:
    """Recount cut and evaluation queries from a trace's event log.

    The totals must match the counter accumulated during play: one cut per
    cut event, one evaluation for the opening cut, two per choice.
    """
    exits = {e.player: e.piece for e in trace.events if isinstance(e, ExitEvent)}
    expected = dict(trace.partition.assignments)
    if exits != expected:
        raise TraceError("incomplete trace: exit events do not cover the partition")
    cuts = sum(1 for e in trace.events if isinstance(e, CutEvent))
    choices = sum(1 for e in trace.events if isinstance(e, ChoiceEvent))
    evals = 2 * choices + (1 if cuts else 0)
    return QueryCounter(cuts, evals)
