"""Decision space of the assistance agent.

Four assistive actions, 48 states (game phase x previous assistance x previous
flip outcome), and the two-phase reward functions: one for the decision taken
before the first card of a move, one for the decision taken after it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import NamedTuple


class AssistAction(IntEnum):
    NO_HELP = 0
    SUG_COL = 1
    SUG_ROW = 2
    SUG_CARD = 3


class GamePhase(IntEnum):
    BEGIN = 0
    MIDDLE = 1
    END = 2


class PrevOutcome(IntEnum):
    F_CORRECT = 0
    F_WRONG = 1
    S_CORRECT = 2
    S_WRONG = 3


N_ACTIONS = len(AssistAction)
N_STATES = len(GamePhase) * len(AssistAction) * len(PrevOutcome)   # 48

# The outcome component records whether the last event was a first or a second
# flip, so it doubles as the decision-point marker: an F_* state is a
# second-flip decision, an S_* state is a first-flip decision.
FIRST_FLIP_OUTCOMES = (PrevOutcome.F_CORRECT, PrevOutcome.F_WRONG)
SECOND_FLIP_OUTCOMES = (PrevOutcome.S_CORRECT, PrevOutcome.S_WRONG)


class MdpState(NamedTuple):
    phase: GamePhase
    prev_assist: AssistAction
    prev_outcome: PrevOutcome

    @property
    def index(self) -> int:
        return encode_state(self.phase, self.prev_assist, self.prev_outcome)


# Convention: a fresh game starts as if nothing has gone wrong yet.
INITIAL_STATE = MdpState(GamePhase.BEGIN, AssistAction.NO_HELP, PrevOutcome.S_CORRECT)


def phase_of(nm: int) -> GamePhase:
    """Game phase from the number of matches found. NM=0 counts as BEGIN."""
    if not 0 <= nm <= 11:
        raise ValueError(f"NM must be in 0..11, got {nm}")
    if nm < 4:
        return GamePhase.BEGIN
    if nm < 8:
        return GamePhase.MIDDLE
    return GamePhase.END


def encode_state(phase: GamePhase, prev_assist: AssistAction, prev_outcome: PrevOutcome) -> int:
    return int(phase) * 16 + int(prev_assist) * 4 + int(prev_outcome)


def decode_state(index: int) -> MdpState:
    if not 0 <= index < N_STATES:
        raise ValueError(f"state index must be in 0..{N_STATES - 1}, got {index}")
    return MdpState(
        GamePhase(index // 16),
        AssistAction((index // 4) % 4),
        PrevOutcome(index % 4),
    )


def all_states() -> list[MdpState]:
    return [decode_state(i) for i in range(N_STATES)]


@dataclass
class RewardParams:
    """Per-action and per-phase reward scales.

    Both maps follow the listing order of their value sets: no-help pairs with
    the large scale so silence is the default-attractive action, and the
    begin-phase carries the largest phase factor.
    """

    a_hat: dict[AssistAction, float] = field(default_factory=lambda: {
        AssistAction.NO_HELP: 10.0,
        AssistAction.SUG_COL: 0.2,
        AssistAction.SUG_ROW: 0.1,
        AssistAction.SUG_CARD: 0.025,
    })
    gs_hat: dict[GamePhase, float] = field(default_factory=lambda: {
        GamePhase.BEGIN: 3.0,
        GamePhase.MIDDLE: 2.0,
        GamePhase.END: 1.0,
    })

    def __post_init__(self) -> None:
        if set(self.a_hat) != set(AssistAction) or set(self.gs_hat) != set(GamePhase):
            raise ValueError("reward params must cover every action and phase")
        if any(v <= 0 for v in self.a_hat.values()) or any(v <= 0 for v in self.gs_hat.values()):
            raise ValueError("reward params must be positive")
        if self.a_hat[AssistAction.NO_HELP] != max(self.a_hat.values()):
            raise ValueError("the no-help scale must be the maximum")

    def to_json_dict(self) -> dict:
        return {
            "a_hat": {a.name.lower(): self.a_hat[a] for a in AssistAction},
            "gs_hat": {p.name.lower(): self.gs_hat[p] for p in GamePhase},
        }

    @staticmethod
    def from_json_dict(data: dict) -> "RewardParams":
        return RewardParams(
            a_hat={AssistAction[k.upper()]: float(v) for k, v in data["a_hat"].items()},
            gs_hat={GamePhase[k.upper()]: float(v) for k, v in data["gs_hat"].items()},
        )


def reward_first(action: AssistAction, nf: int, params: RewardParams) -> float:
    """Reward for the decision before the first flip of a move.

    nf is the 1-based count of flips since the last match at reward time
    (nf_since_match + 1), keeping the first flip after a match at nf=1.
    """
    if nf < 1:
        raise ValueError(f"nf must be >= 1, got {nf}")
    return params.a_hat[action] / nf


def reward_second(action: AssistAction, nf: int, phase: GamePhase, params: RewardParams) -> float:
    """Reward for the decision before the second flip of a move.

    Silence pays less the longer the player flounders; assistance pays more,
    which is the crossover that forces eventual intervention.
    """
    if nf < 1:
        raise ValueError(f"nf must be >= 1, got {nf}")
    scaled = nf * params.gs_hat[phase]
    if action is AssistAction.NO_HELP:
        return params.a_hat[action] / scaled
    return params.a_hat[action] * scaled
