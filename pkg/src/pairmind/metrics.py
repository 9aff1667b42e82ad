"""Objective metrics over played games.

The assistance weighting is the study's normalization: silence counts 0, a
column hint 0.5, a row hint 1 and a card hint 2; a game's normalized
assistance is the mean weight over its decisions (two per move).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .episodes import EpisodeResult
from .mdp import AssistAction

ASSIST_WEIGHTS: dict[AssistAction, float] = {
    AssistAction.NO_HELP: 0.0,
    AssistAction.SUG_COL: 0.5,
    AssistAction.SUG_ROW: 1.0,
    AssistAction.SUG_CARD: 2.0,
}


def normalized_assistance(actions: Iterable[AssistAction]) -> float:
    actions = list(actions)
    if not actions:
        return 0.0
    return sum(ASSIST_WEIGHTS[a] for a in actions) / len(actions)


@dataclass
class GameRecord:
    moves: int
    flips: int
    completed: bool
    normalized_assistance: float
    suggestions_offered: int
    suggestions_followed: int
    suggestions_led_to_match: int
    seed: Optional[int] = None
    duration_ms: Optional[int] = None

    @staticmethod
    def from_episode(result: EpisodeResult, duration_ms: Optional[int] = None) -> "GameRecord":
        return GameRecord(
            moves=result.moves,
            flips=result.flips,
            completed=result.completed,
            normalized_assistance=normalized_assistance(result.assist_actions),
            suggestions_offered=result.suggestions_offered,
            suggestions_followed=result.suggestions_followed,
            suggestions_led_to_match=result.suggestions_led_to_match,
            seed=result.seed,
            duration_ms=duration_ms,
        )

    def to_json_dict(self) -> dict:
        return {
            "moves": self.moves,
            "flips": self.flips,
            "completed": self.completed,
            "normalized_assistance": self.normalized_assistance,
            "suggestions_offered": self.suggestions_offered,
            "suggestions_followed": self.suggestions_followed,
            "suggestions_led_to_match": self.suggestions_led_to_match,
            "seed": self.seed,
            "duration_ms": self.duration_ms,
        }

    @staticmethod
    def from_json_dict(data: dict) -> "GameRecord":
        return GameRecord(**data)


@dataclass
class RunStats:
    games: list[GameRecord] = field(default_factory=list)

    def add(self, record: GameRecord) -> None:
        self.games.append(record)

    @property
    def n(self) -> int:
        return len(self.games)

    @property
    def mean_moves(self) -> float:
        return sum(g.moves for g in self.games) / self.n

    @property
    def sd_moves(self) -> float:
        mean = self.mean_moves
        return math.sqrt(sum((g.moves - mean) ** 2 for g in self.games) / self.n)

    @property
    def mean_flips(self) -> float:
        return sum(g.flips for g in self.games) / self.n

    @property
    def mean_normalized_assistance(self) -> float:
        return sum(g.normalized_assistance for g in self.games) / self.n

    @property
    def suggestions_offered(self) -> int:
        return sum(g.suggestions_offered for g in self.games)

    @property
    def follow_rate(self) -> float:
        """Pooled followed/offered over the run; 0.0 when nothing was offered."""
        offered = self.suggestions_offered
        if offered == 0:
            return 0.0
        return sum(g.suggestions_followed for g in self.games) / offered

    @property
    def match_from_hint_rate(self) -> float:
        offered = self.suggestions_offered
        if offered == 0:
            return 0.0
        return sum(g.suggestions_led_to_match for g in self.games) / offered

    def summary(self) -> dict:
        return {
            "n": self.n,
            "mean_moves": self.mean_moves,
            "sd_moves": self.sd_moves,
            "mean_flips": self.mean_flips,
            "mean_normalized_assistance": self.mean_normalized_assistance,
            "suggestions_offered": self.suggestions_offered,
            "follow_rate": self.follow_rate,
            "match_from_hint_rate": self.match_from_hint_rate,
        }
