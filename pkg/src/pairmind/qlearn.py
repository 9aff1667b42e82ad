"""Tabular Q-learning over the 48-state assistance MDP.

Epsilon-greedy exploration with per-episode schedules (epsilon decays
exponentially to its floor, alpha grows linearly to its cap), two TD updates
per move, and JSON persistence that keeps the reward parameters embedded so a
policy never travels without the rewards that produced it.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass
from random import Random
from typing import Callable, Optional

import numpy as np

from .episodes import EpisodeResult, Transition, run_episode
from .mdp import (
    AssistAction,
    GamePhase,
    MdpState,
    N_ACTIONS,
    N_STATES,
    PrevOutcome,
    RewardParams,
    decode_state,
)
from .mentalising import MODE_TOM
from .players import PlayerSpec

SCHEMA_VERSION = 1

BACKUP_MODES = ("move", "game")
DEFAULT_EPISODES = 20_000


@dataclass
class Schedule:
    """Per-episode exploration/learning-rate schedules.

    epsilon(k) = max(floor, epsilon0 * decay^k); alpha(k) = min(cap, alpha0 + growth*k).
    """

    epsilon0: float = 1.0
    epsilon_floor: float = 0.1
    epsilon_decay: float = 0.9998560860594024   # reaches the floor at 16k episodes
    alpha0: float = 0.1
    alpha_cap: float = 0.95
    alpha_growth: float = 0.85 / 16_000

    @staticmethod
    def for_episodes(episodes: int, floor_fraction: float = 0.8) -> "Schedule":
        """Schedules hitting their limits at `floor_fraction` of the run."""
        span = max(1.0, floor_fraction * episodes)
        return Schedule(
            epsilon_decay=0.1 ** (1.0 / span),
            alpha_growth=(0.95 - 0.1) / span,
        )

    def to_json_dict(self) -> dict:
        return {
            "epsilon0": self.epsilon0,
            "epsilon_floor": self.epsilon_floor,
            "epsilon_decay": self.epsilon_decay,
            "alpha0": self.alpha0,
            "alpha_cap": self.alpha_cap,
            "alpha_growth": self.alpha_growth,
        }

    @staticmethod
    def from_json_dict(data: dict) -> "Schedule":
        return Schedule(**data)


def schedule_at(sched: Schedule, episode: int) -> tuple[float, float]:
    if episode < 0:
        raise ValueError("episode must be >= 0")
    epsilon = max(sched.epsilon_floor, sched.epsilon0 * sched.epsilon_decay ** episode)
    alpha = min(sched.alpha_cap, sched.alpha0 + sched.alpha_growth * episode)
    return epsilon, alpha


@dataclass(eq=False)
class QTable:
    values: np.ndarray            # 48 x 4
    meta: dict

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (N_STATES, N_ACTIONS):
            raise ValueError(f"Q table must be {N_STATES}x{N_ACTIONS}, got {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("Q table entries must be finite")

    @staticmethod
    def zeros(meta: Optional[dict] = None) -> "QTable":
        return QTable(np.zeros((N_STATES, N_ACTIONS)), meta or {})


def select_from_row(row, epsilon: float, rng: Random) -> AssistAction:
    """Epsilon-greedy over one table row; greedy ties break uniformly at random."""
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError("epsilon must be in [0, 1]")
    if epsilon > 0.0 and rng.random() < epsilon:
        return AssistAction(rng.randrange(N_ACTIONS))
    best = max(row)
    ties = [i for i in range(N_ACTIONS) if row[i] == best]
    return AssistAction(ties[0] if len(ties) == 1 else rng.choice(ties))


def select_action(q: QTable, s: MdpState, epsilon: float, rng: Random) -> AssistAction:
    return select_from_row(q.values[s.index], epsilon, rng)


def td_target(reward: float, next_row, gamma: float) -> float:
    """Backup target; a missing next row means a terminal transition."""
    if next_row is None:
        return reward
    return reward + gamma * max(next_row)


def update(q: QTable, t: Transition, alpha: float, gamma: float) -> QTable:
    """One TD update, returned as a new table (all other cells unchanged).
    alpha=0 degenerates to a no-op."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must be in [0, 1]")
    if not 0.0 <= gamma < 1.0:
        raise ValueError("gamma must be in [0, 1)")
    values = q.values.copy()
    next_row = None if t.s_next is None else values[t.s_next.index]
    cell = values[t.s.index][t.a]
    values[t.s.index][t.a] = cell + alpha * (td_target(t.r, next_row, gamma) - cell)
    return QTable(values, dict(q.meta))


def greedy_policy(q: QTable) -> dict[MdpState, AssistAction]:
    """Per-state argmax with deterministic lowest-index tie-break."""
    return {
        decode_state(i): AssistAction(int(np.argmax(q.values[i])))
        for i in range(N_STATES)
    }


def _resolve_created_at(created_at: Optional[float]) -> float:
    if created_at is not None:
        return created_at
    env = os.environ.get("SOURCE_DATE_EPOCH")
    if env is not None:
        return float(int(env))
    return time.time()


def train(
    episodes: int,
    player: Optional[PlayerSpec] = None,
    seed: int = 0,
    sched: Optional[Schedule] = None,
    params: Optional[RewardParams] = None,
    gamma: float = 0.8,
    mode: str = MODE_TOM,
    backup: str = "move",
    window: Optional[int] = None,
    created_at: Optional[float] = None,
    episode_hook: Optional[Callable[[int, EpisodeResult, float, float], None]] = None,
) -> QTable:
    """Run `episodes` full games of the simulated player under the evolving
    epsilon-greedy policy; two decisions and two updates per move.

    `backup` picks the TD target of the second decision: "move" treats it as
    terminal (the default; the value of a move's assistance is judged by its
    own rewards), "game" bootstraps into the next move's state.
    """
    if episodes < 1:
        raise ValueError("episodes must be >= 1")
    if backup not in BACKUP_MODES:
        raise ValueError(f"backup must be one of {BACKUP_MODES}")
    player = player or PlayerSpec()
    sched = sched or Schedule.for_episodes(episodes)
    params = params or RewardParams()
    rng = Random(seed)
    rows = [[0.0] * N_ACTIONS for _ in range(N_STATES)]

    current = {"epsilon": sched.epsilon0, "alpha": sched.alpha0}

    def policy(state: MdpState, decision_point: str) -> AssistAction:
        return select_from_row(rows[state.index], current["epsilon"], rng)

    def apply(t: Transition) -> None:
        if t.s_next is None or (backup == "move" and t.decision_point == "second"):
            next_row = None
        else:
            next_row = rows[t.s_next.index]
        row = rows[t.s.index]
        row[t.a] += current["alpha"] * (td_target(t.r, next_row, gamma) - row[t.a])

    for k in range(episodes):
        current["epsilon"], current["alpha"] = schedule_at(sched, k)
        runner = player.build(rng)
        result = run_episode(
            runner, rng,
            policy=policy, mode=mode, params=params,
            window=window, on_transition=apply,
        )
        if episode_hook is not None:
            episode_hook(k, result, current["epsilon"], current["alpha"])

    meta = {
        "episodes_trained": episodes,
        "gamma": gamma,
        "seed": seed,
        "mode": mode,
        "backup": backup,
        "schedule": sched.to_json_dict(),
        "reward_params": params.to_json_dict(),
        "player": player.to_json_dict(),
        "schema_version": SCHEMA_VERSION,
        "created_at": _resolve_created_at(created_at),
    }
    return QTable(np.array(rows), meta)


# --- persistence ---

def qtable_to_json(q: QTable) -> str:
    states = []
    for i in range(N_STATES):
        s = decode_state(i)
        states.append({
            "phase": s.phase.name.lower(),
            "prev_assist": s.prev_assist.name.lower(),
            "prev_outcome": s.prev_outcome.name.lower(),
            "q": [float(v) for v in q.values[i]],
        })
    doc = {"schema_version": SCHEMA_VERSION, "meta": q.meta, "states": states}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def qtable_from_json(text: str) -> QTable:
    doc = json.loads(text)
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported Q-table schema_version: {version!r}")
    values = np.zeros((N_STATES, N_ACTIONS))
    seen = set()
    for entry in doc["states"]:
        s = MdpState(
            GamePhase[entry["phase"].upper()],
            AssistAction[entry["prev_assist"].upper()],
            PrevOutcome[entry["prev_outcome"].upper()],
        )
        if s.index in seen:
            raise ValueError(f"duplicate state entry: {entry}")
        seen.add(s.index)
        values[s.index] = entry["q"]
    if len(seen) != N_STATES:
        raise ValueError(f"Q-table file holds {len(seen)} states, expected {N_STATES}")
    return QTable(values, doc.get("meta", {}))


def save_qtable(q: QTable, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(qtable_to_json(q))


def load_qtable(path: str) -> QTable:
    with open(path, encoding="utf-8") as fh:
        return qtable_from_json(fh.read())
