"""Lens laws, cut/choose units, query counting, and pipeline-engine parity."""

import random
from fractions import Fraction as F
from functools import reduce

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cakecut import (
    Cake,
    ChoiceEvent,
    GameConfig,
    GameTrace,
    Lens,
    Pick,
    Piece,
    QueryCounter,
    Rule,
    bp_best_response,
    choose_bigger,
    compose_game,
    compose_seq,
    count_queries,
    deviate,
    equilibrium_profile,
    identity_lens,
    make_choose_unit,
    make_cut_unit,
    play,
    play_composed,
    vanilla_player_unit,
)
from cakecut.engines import halve_cut
from cakecut.equilibrium import backward_induction, Grid
from cakecut.lenses import PlayState, game_units, initial_state
from cakecut.errors import CompositionError, StrategyError, TraceError
from cakecut.metrics import rw_complexity


# --- generic lens laws --------------------------------------------------------

double = Lens(lambda x: 2 * x, lambda x, r: r + x)
shift = Lens(lambda x: x + 3, lambda x, r: 2 * r)
negate = Lens(lambda x: -x, lambda x, r: r - 1)

fraction_values = st.fractions(min_value=-10, max_value=10, max_denominator=20)


@given(x=fraction_values, r=fraction_values)
def test_identity_laws(x, r):
    for lens in (double, shift, negate):
        left = compose_seq(identity_lens, lens)
        right = compose_seq(lens, identity_lens)
        assert left.forward(x) == lens.forward(x) == right.forward(x)
        assert left.backward(x, r) == lens.backward(x, r) == right.backward(x, r)


@given(x=fraction_values, r=fraction_values)
def test_composition_is_associative(x, r):
    nested_left = compose_seq(compose_seq(double, shift), negate)
    nested_right = compose_seq(double, compose_seq(shift, negate))
    assert nested_left.forward(x) == nested_right.forward(x)
    assert nested_left.backward(x, r) == nested_right.backward(x, r)


def test_backward_threads_through_forward():
    composed = compose_seq(double, shift)
    # g2's backward sees g1's forward output context; g1's backward sees raw input
    assert composed.forward(F(2)) == 7
    assert composed.backward(F(2), F(5)) == 2 * F(5) + F(2)


def test_composition_checks_interface_tags():
    cut = make_cut_unit(1, halve_cut)
    with pytest.raises(CompositionError):
        compose_seq(cut, cut)


# --- cut and choose units ------------------------------------------------------

def held_state(piece, remaining=(2,), rule=Rule.VANILLA):
    return PlayState(rule, remaining, 1, piece, None)


def test_cut_unit_halves_unit_piece():
    state = make_cut_unit(1, halve_cut).forward(held_state(Piece(F(0), F(1))))
    assert tuple(p.size for p in state.offer) == (F(1, 2), F(1, 2))
    assert state.cuts == 1 and state.evals == 1


def test_cut_unit_quarter_of_two_thirds():
    unit = make_cut_unit(1, lambda ctx: F(1, 4))
    state = unit.forward(held_state(Piece(F(0), F(2, 3))))
    assert tuple(p.size for p in state.offer) == (F(1, 6), F(1, 2))


def test_cut_unit_degenerate_zero_cut_is_legal():
    unit = make_cut_unit(1, lambda ctx: F(0))
    state = unit.forward(held_state(Piece(F(0), F(1))))
    assert tuple(p.size for p in state.offer) == (F(0), F(1))


def test_cut_unit_rejects_out_of_range_policy():
    unit = make_cut_unit(1, lambda ctx: F(5, 4))
    with pytest.raises(StrategyError):
        unit.forward(held_state(Piece(F(0), F(1))))


def test_cut_unit_charges_eval_only_for_the_opening_cut():
    later = held_state(Piece(F(0), F(1)))
    later = PlayState(later.rule, later.remaining, later.holder, later.piece,
                      None, cuts=1, evals=3)
    state = make_cut_unit(1, halve_cut).forward(later)
    assert (state.cuts, state.evals) == (2, 3)


def offer_state(a, b, remaining, rule=Rule.BIGGEST_PLAYER):
    lo = Piece(F(0), a)
    hi = Piece(a, a + b)
    return PlayState(rule, remaining, 1, None, (lo, hi))


def test_choose_unit_picks_bigger_and_reports_bit_one():
    state = offer_state(F(1, 4), F(3, 4), remaining=(2,), rule=Rule.VANILLA)
    unit = make_choose_unit(2, choose_bigger)
    done = unit.forward(state)
    assert any(isinstance(e, ChoiceEvent) and e.picked is Pick.SECOND
               for e in done.events)
    assert unit.backward(state, None) == 1


def test_choose_unit_tie_picks_first_bit_zero():
    state = offer_state(F(1, 2), F(1, 2), remaining=(2,), rule=Rule.VANILLA)
    unit = make_choose_unit(2, choose_bigger)
    assert unit.backward(state, None) == 0


def test_choose_unit_bp_equilibrium_choice_matches_value_oracle():
    # offered (1/3, 2/3) with one entrant waiting: leaving with 1/3 equals
    # carrying 2/3 into a two-player split, per the induction oracle
    value, _ = backward_induction(F(2, 3), 2, Grid(60))
    assert value == F(1, 3)
    state = offer_state(F(1, 3), F(2, 3), remaining=(2, 3))
    unit = make_choose_unit(2, bp_best_response)
    assert unit.backward(state, None) == 0  # ties exit with the small piece
    done = unit.forward(state)
    assert done.holder == 1 and done.piece.size == F(2, 3)


def test_choose_unit_rejects_wrong_player_wiring():
    state = offer_state(F(1, 2), F(1, 2), remaining=(2,))
    with pytest.raises(CompositionError):
        make_choose_unit(3, choose_bigger).forward(state)


# --- appendix-style grouping and full pipelines ---------------------------------

def test_player_block_is_choose_then_cut():
    cfg = GameConfig(3, Cake(F(1)), Rule.VANILLA)
    profile = equilibrium_profile(cfg)
    block = vanilla_player_unit(2, profile)
    state = offer_state(F(1, 2), F(1, 2), remaining=(2, 3), rule=Rule.VANILLA)
    out = block.forward(state)
    # player 2 chose the first half and immediately re-offered it, halved
    assert tuple(p.size for p in out.offer) == (F(1, 4), F(1, 4))
    assert out.holder == 2


def test_pipeline_groupings_agree():
    cfg = GameConfig(4, Cake(F(1)), Rule.VANILLA)
    profile = equilibrium_profile(cfg)
    flat = compose_game(cfg, profile)
    grouped = reduce(compose_seq, [
        make_cut_unit(1, profile.cuts[1]),
        vanilla_player_unit(2, profile),
        vanilla_player_unit(3, profile),
        make_choose_unit(4, profile.choices[4]),
    ])
    start = initial_state(cfg)
    assert flat.forward(start) == grouped.forward(start)
    assert flat.backward(start, 1) == grouped.backward(start, 1)


def test_pipeline_state_conserves_cake_at_every_stage():
    cfg = GameConfig(5, Cake(F(1)), Rule.BIGGEST_PLAYER)
    profile = deviate(equilibrium_profile(cfg), 1, F(7, 60))
    state = initial_state(cfg)
    for unit in game_units(cfg, profile):
        state = unit.forward(state)
        allocated = sum((piece.size for _, piece in state.allocations), F(0))
        active = sum((p.size for p in state.offer), F(0)) if state.offer \
            else (state.piece.size if state.piece else F(0))
        assert allocated + active == F(1)


def engine_and_pipeline_agree(cfg, profile):
    direct = play(cfg, profile)
    composed = play_composed(cfg, profile)
    assert composed[0] == direct[0]
    assert composed[1] == direct[1]


def test_pipeline_matches_engine_on_equilibrium_profiles():
    for rule in Rule:
        for n in range(1, 9):
            cfg = GameConfig(n, Cake(F(1)), rule)
            engine_and_pipeline_agree(cfg, equilibrium_profile(cfg))


def test_pipeline_matches_engine_on_random_profiles():
    rng = random.Random(404)
    for _ in range(60):
        rule = rng.choice(list(Rule))
        n = rng.randrange(2, 7)
        cfg = GameConfig(n, Cake(F(1)), rule)
        profile = deviate(equilibrium_profile(cfg), rng.randrange(1, n + 1),
                          F(rng.randrange(0, 25), 24))
        engine_and_pipeline_agree(cfg, profile)


# --- query counting --------------------------------------------------------------

def test_query_totals_both_rules():
    for rule in Rule:
        for n in range(2, 13):
            cfg = GameConfig(n, Cake(F(1)), rule)
            _, trace = play(cfg, equilibrium_profile(cfg))
            counted = count_queries(trace)
            assert counted == trace.queries
            assert counted.total == rw_complexity(n)


def test_query_examples():
    for n, total in ((2, 4), (3, 7), (10, 28)):
        cfg = GameConfig(n, Cake(F(1)), Rule.VANILLA)
        _, trace = play(cfg, equilibrium_profile(cfg))
        assert count_queries(trace).total == total


def test_count_queries_rejects_incomplete_trace():
    cfg = GameConfig(3, Cake(F(1)), Rule.VANILLA)
    _, trace = play(cfg, equilibrium_profile(cfg))
    broken = GameTrace(trace.events[:-1], trace.partition, trace.queries)
    with pytest.raises(TraceError):
        count_queries(broken)


def test_counter_totals_are_monotone_along_the_pipeline():
    cfg = GameConfig(6, Cake(F(1)), Rule.BIGGEST_PLAYER)
    profile = equilibrium_profile(cfg)
    state = initial_state(cfg)
    seen = QueryCounter(0, 0)
    for unit in game_units(cfg, profile):
        state = unit.forward(state)
        now = QueryCounter(state.cuts, state.evals)
        assert now.cuts >= seen.cuts and now.evals >= seen.evals
        seen = now
    assert seen.total == rw_complexity(6)
