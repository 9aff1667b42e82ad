"""Adaptive assistance for the Concentration memory game.

A tabular Q-learning layer decides when and how much to help; a heuristic
mentalising layer turns the chosen assistance into a concrete, history-grounded
hint with an explanation. Train in simulation, evaluate in batch, play live
against the service.
"""

from .game import (
    CardFace,
    CellStatus,
    FlipNotAllowed,
    FlipRecord,
    GameState,
    Location,
    face_down_locations,
    flip,
    game_summary,
    new_game,
    partner_of,
    replay,
)
from .mdp import (
    AssistAction,
    GamePhase,
    MdpState,
    PrevOutcome,
    RewardParams,
    decode_state,
    encode_state,
    phase_of,
    reward_first,
    reward_second,
)
from .mentalising import (
    ExplanationCase,
    Hint,
    HistoryStats,
    MODE_NOTOM,
    MODE_TOM,
    MoveClass,
    classify_move,
    first_flip_outcome,
    infer_target_face,
    operationalize_first,
    operationalize_second,
    render_explanation,
)
from .players import (
    ImperfectPlayer,
    MatchProbability,
    MemoryModel,
    PerfectPlayer,
    PlayerSpec,
    match_probability,
    observe_flip,
)
from .qlearn import (
    QTable,
    Schedule,
    greedy_policy,
    load_qtable,
    save_qtable,
    schedule_at,
    select_action,
    train,
    update,
)
from .episodes import EpisodeResult, Transition, run_episode
from .metrics import ASSIST_WEIGHTS, GameRecord, RunStats, normalized_assistance
from .experiments import ExperimentConfig, eval_policy_report, simulate

__version__ = "0.1.0"
