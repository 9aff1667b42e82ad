"""One full game of a simulated player under an assistance policy.

This loop is the single implementation used for training, batch evaluation and
parity checks: at each move the policy acts twice (before each flip), hints are
grounded by the mentalising layer, rewards follow the two-phase scheme, and
every decision is reported as a transition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from random import Random
from typing import Callable, Optional

from .game import GameState, flip, new_game
from .mdp import (
    AssistAction,
    MdpState,
    PrevOutcome,
    INITIAL_STATE,
    RewardParams,
    phase_of,
    reward_first,
    reward_second,
)
from .mentalising import (
    Hint,
    HistoryStats,
    MODE_TOM,
    first_flip_outcome,
    operationalize_first,
    operationalize_second,
    target_contains,
)
from .players import Player

# Saturation point for reward-time nf; bounds the single-step reward and with
# it the magnitude of any Q value.
NF_REWARD_CAP = 24 * 12


@dataclass(frozen=True)
class Transition:
    s: MdpState
    a: AssistAction
    r: float
    s_next: Optional[MdpState]        # None = end of game (no bootstrap)
    decision_point: str               # "first" | "second"


@dataclass
class EpisodeResult:
    moves: int
    flips: int
    completed: bool
    assist_actions: list[AssistAction] = field(default_factory=list)
    suggestions_offered: int = 0
    suggestions_followed: int = 0
    suggestions_led_to_match: int = 0
    seed: Optional[int] = None


PolicyFn = Callable[[MdpState, str], AssistAction]


def silent_policy(state: MdpState, decision_point: str) -> AssistAction:
    return AssistAction.NO_HELP


def greedy_policy_fn(values) -> PolicyFn:
    """Policy over a 48x4 value table (anything indexable), lowest-index ties."""

    def policy(state: MdpState, decision_point: str) -> AssistAction:
        row = values[state.index]
        best = 0
        for i in range(1, 4):
            if row[i] > row[best]:
                best = i
        return AssistAction(best)

    return policy


def run_episode(
    player: Player,
    rng: Random,
    policy: PolicyFn = silent_policy,
    mode: str = MODE_TOM,
    params: Optional[RewardParams] = None,
    game: Optional[GameState] = None,
    seed: Optional[int] = None,
    window: Optional[int] = None,
    templates: Optional[dict[str, str]] = None,
    on_transition: Optional[Callable[[Transition], None]] = None,
    on_hint: Optional[Callable[[Hint, GameState, HistoryStats], None]] = None,
    max_moves: int = 10_000,
) -> EpisodeResult:
    """Play one game to completion; returns per-game counters.

    The game board is taken from `game` or built from `seed` (falling back to a
    board drawn from `rng`). All stochastic choices (policy exploration, hint
    grounding, player behaviour) consume the single `rng` stream, so a
    (seed, config) pair fully determines the episode.
    """
    params = params or RewardParams()
    if game is None:
        game = new_game(seed if seed is not None else rng.getrandbits(48))
    stats = HistoryStats()
    result = EpisodeResult(moves=0, flips=0, completed=False, seed=game.rng_seed)
    state = INITIAL_STATE

    while not game.complete and result.moves < max_moves:
        result.moves += 1
        phase = phase_of(game.nm)
        gs_phase = phase  # both decisions of a move share the pre-move phase

        # --- decision point 1: before the first flip ---
        nf1 = min(game.nf_since_match + 1, NF_REWARD_CAP)
        a1 = policy(state, "first")
        result.assist_actions.append(a1)
        hint1 = operationalize_first(a1, stats, game, mode, rng, window=window, templates=templates)
        if on_hint is not None:
            on_hint(hint1, game, stats)
        loc1 = player.first_flip(game, None if hint1.is_silent else hint1)
        flip(game, loc1)
        rec1 = game.ledger[-1]
        player.observe(rec1)
        stats.observe(rec1)
        followed1 = hint1.target is not None and target_contains(hint1.target, loc1)
        if not hint1.is_silent:
            result.suggestions_offered += 1
            if followed1:
                result.suggestions_followed += 1
        outcome1 = (
            PrevOutcome.F_CORRECT
            if first_flip_outcome(None if hint1.is_silent else hint1, rec1, stats)
            else PrevOutcome.F_WRONG
        )
        s2 = MdpState(gs_phase, a1, outcome1)
        r1 = reward_first(a1, nf1, params)
        if on_transition is not None:
            on_transition(Transition(state, a1, r1, s2, "first"))

        # --- decision point 2: before the second flip ---
        nf2 = min(game.nf_since_match + 1, NF_REWARD_CAP)
        a2 = policy(s2, "second")
        result.assist_actions.append(a2)
        hint2 = operationalize_second(a2, rec1, stats, game, mode, templates=templates)
        if on_hint is not None:
            on_hint(hint2, game, stats)
        loc2 = player.second_flip(game, rec1, None if hint2.is_silent else hint2)
        outcome = flip(game, loc2)
        rec2 = game.ledger[-1]
        player.observe(rec2)
        stats.observe(rec2)
        followed2 = hint2.target is not None and target_contains(hint2.target, loc2)
        if not hint2.is_silent:
            result.suggestions_offered += 1
            if followed2:
                result.suggestions_followed += 1
        if outcome.produced_match:
            if followed1 and not hint1.is_silent:
                result.suggestions_led_to_match += 1
            if followed2 and not hint2.is_silent:
                result.suggestions_led_to_match += 1
        outcome2 = PrevOutcome.S_CORRECT if outcome.produced_match else PrevOutcome.S_WRONG
        r2 = reward_second(a2, nf2, gs_phase, params)
        if game.complete:
            s3 = None
        else:
            s3 = MdpState(phase_of(game.nm), a2, outcome2)
        if on_transition is not None:
            on_transition(Transition(s2, a2, r2, s3, "second"))
        if s3 is not None:
            state = s3

    result.flips = game.nf
    result.completed = game.complete
    return result
