"""Exact dynamic-programming oracle for verifying the Q-learning machinery.

A deliberately tiny 2-pair game with a deterministic player gives an MDP whose
states can be enumerated outright. Value iteration computes the exact optimal
action values; the same generic TD update the trainer uses must converge to
them, which pins down the update arithmetic, the argmax and the terminal
handling independently of the big environment.
"""

from __future__ import annotations

from random import Random
from typing import NamedTuple, Optional

from .mdp import AssistAction, GamePhase, RewardParams, reward_first, reward_second
from .qlearn import select_from_row, td_target

N_ENV_CELLS = 4
ENV_ROWS = 2
ENV_COLS = 2
NF_SANITY_CAP = 64


class OracleNonConvergence(Exception):
    """Value iteration failed to reach its fixed point; modelling bug."""


class EnvState(NamedTuple):
    removed: tuple[bool, bool, bool, bool]
    seen: tuple[bool, bool, bool, bool]
    matched: int
    nf_since: int
    pending: Optional[int]     # face-up cell awaiting the second flip


class TwoPairEnv:
    """2x2 Concentration with a deterministic perfect-memory player.

    The player resolves every choice by lowest cell index and follows hints
    deterministically, so each (state, action) has exactly one successor.
    """

    actions = tuple(AssistAction)

    def __init__(self, layout: tuple[int, int, int, int] = (0, 1, 1, 0),
                 params: Optional[RewardParams] = None) -> None:
        if sorted(layout) != [0, 0, 1, 1]:
            raise ValueError("layout must hold two faces twice each")
        self.layout = layout
        self.params = params or RewardParams()
        self.partner = tuple(
            next(j for j in range(N_ENV_CELLS) if j != i and layout[j] == layout[i])
            for i in range(N_ENV_CELLS)
        )

    def initial_state(self) -> EnvState:
        return EnvState((False,) * 4, (False,) * 4, 0, 0, None)

    def phase(self, matched: int) -> GamePhase:
        return GamePhase.BEGIN if matched == 0 else GamePhase.END

    # --- deterministic player ---

    def _line_cells(self, action: AssistAction, anchor: int) -> list[int]:
        if action is AssistAction.SUG_ROW:
            row = anchor // ENV_COLS
            return [row * ENV_COLS, row * ENV_COLS + 1]
        col = anchor % ENV_COLS
        return [col, col + ENV_COLS]

    def _first_flip(self, s: EnvState, action: AssistAction) -> int:
        down = [i for i in range(N_ENV_CELLS) if not s.removed[i] and i != s.pending]
        if action is not AssistAction.NO_HELP:
            # Hint target: the partner of the lowest seen face-down cell, else
            # the lowest face-down cell.
            anchored = next((i for i in down if s.seen[i] and not s.removed[self.partner[i]]), None)
            target = self.partner[anchored] if anchored is not None else down[0]
            if action is AssistAction.SUG_CARD:
                return target
            line = [c for c in self._line_cells(action, target) if c in down]
            return line[0]
        # Remembered pair first, else lowest unseen, else lowest face-down.
        for i in down:
            j = self.partner[i]
            if s.seen[i] and s.seen[j] and not s.removed[j]:
                return min(i, j)
        unseen = [i for i in down if not s.seen[i]]
        return unseen[0] if unseen else down[0]

    def _second_flip(self, s: EnvState, action: AssistAction) -> int:
        # Memory overrides a line hint: the truthful line always contains the
        # partner, so a player who remembers it just flips it. Otherwise the
        # lowest unseen cell of the line. Every move therefore either matches
        # or reveals a new cell, which keeps the state space finite.
        assert s.pending is not None
        down = [i for i in range(N_ENV_CELLS) if not s.removed[i] and i != s.pending]
        mate = self.partner[s.pending]
        if action is AssistAction.SUG_CARD:
            return mate
        if s.seen[mate]:
            return mate
        if action in (AssistAction.SUG_ROW, AssistAction.SUG_COL):
            line = [c for c in self._line_cells(action, mate) if c in down]
            unseen_line = [c for c in line if not s.seen[c]]
            return unseen_line[0] if unseen_line else line[0]
        unseen = [i for i in down if not s.seen[i]]
        return unseen[0] if unseen else down[0]

    # --- MDP interface ---

    def step(self, s: EnvState, action: AssistAction) -> tuple[float, Optional[EnvState]]:
        """Deterministic transition; next state None when the game completes."""
        assert s.nf_since < NF_SANITY_CAP, "nf runaway: deterministic player stuck"
        if s.pending is None:
            reward = reward_first(action, s.nf_since + 1, self.params)
            cell = self._first_flip(s, action)
            seen = tuple(v or i == cell for i, v in enumerate(s.seen))
            return reward, EnvState(s.removed, seen, s.matched, s.nf_since + 1, cell)

        reward = reward_second(action, s.nf_since + 1, self.phase(s.matched), self.params)
        cell = self._second_flip(s, action)
        seen = tuple(v or i == cell for i, v in enumerate(s.seen))
        if self.layout[cell] == self.layout[s.pending]:
            removed = tuple(v or i in (cell, s.pending) for i, v in enumerate(s.removed))
            matched = s.matched + 1
            if matched == 2:
                return reward, None
            return reward, EnvState(removed, seen, matched, 0, None)
        return reward, EnvState(s.removed, seen, s.matched, s.nf_since + 1, None)


def enumerate_states(env: TwoPairEnv) -> list[EnvState]:
    """All states reachable from the initial state under any action sequence."""
    frontier = [env.initial_state()]
    seen: set[EnvState] = {frontier[0]}
    order: list[EnvState] = []
    while frontier:
        state = frontier.pop()
        order.append(state)
        for action in env.actions:
            _, nxt = env.step(state, action)
            if nxt is not None and nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return order


def value_iterate(
    env: TwoPairEnv,
    gamma: float = 0.8,
    tol: float = 1e-9,
    max_iter: int = 100_000,
) -> dict[EnvState, list[float]]:
    """Bellman backups to the fixed point; exact optimal Q within `tol`."""
    states = enumerate_states(env)
    q: dict[EnvState, list[float]] = {s: [0.0] * len(env.actions) for s in states}
    for _ in range(max_iter):
        delta = 0.0
        for s in states:
            for a in env.actions:
                reward, nxt = env.step(s, a)
                value = td_target(reward, None if nxt is None else q[nxt], gamma)
                delta = max(delta, abs(value - q[s][a]))
                q[s][a] = value
        if delta < tol:
            return q
    raise OracleNonConvergence(f"no fixed point after {max_iter} sweeps (delta={delta})")


def q_learn_env(
    env: TwoPairEnv,
    episodes: int = 2_000,
    gamma: float = 0.8,
    alpha: float = 1.0,
    epsilon: float = 1.0,
    seed: int = 0,
) -> dict[EnvState, list[float]]:
    """Tabular Q-learning on the small environment with the shared TD update.

    The environment is deterministic, so a full-exploration run with alpha=1
    converges to the exact optimal values.
    """
    rng = Random(seed)
    q: dict[EnvState, list[float]] = {}
    for _ in range(episodes):
        state: Optional[EnvState] = env.initial_state()
        while state is not None:
            row = q.setdefault(state, [0.0] * len(env.actions))
            action = select_from_row(row, epsilon, rng)
            reward, nxt = env.step(state, action)
            next_row = None if nxt is None else q.setdefault(nxt, [0.0] * len(env.actions))
            row[action] += alpha * (td_target(reward, next_row, gamma) - row[action])
            state = nxt
    return q


def greedy_of(q: dict[EnvState, list[float]]) -> dict[EnvState, AssistAction]:
    return {
        s: AssistAction(max(range(len(row)), key=lambda i: (row[i], -i)))
        for s, row in q.items()
    }
