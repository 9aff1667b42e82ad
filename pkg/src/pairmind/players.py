"""Simulated players.

Two models: a perfect-memory player used as the fast baseline, and an
imperfect player whose recall decays with the flips elapsed since a card was
last seen. The imperfect player is the one the assistance policy is trained
against; hints change where it flips and how likely the second card is to
match.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from random import Random
from typing import Optional

from .game import (
    CellStatus,
    FlipRecord,
    GameState,
    Location,
    N_CELLS,
    N_PAIRS,
    partner_of,
)
from .mdp import AssistAction
from .mentalising import Hint, target_cells

# Calibrated so the unassisted imperfect player completes in ~48.15 moves on
# average over seeded batches (grid-searched; see tests/test_acceptance.py).
DEFAULT_DECAY = 0.196
DEFAULT_P_EXPLORE = 0.5

ROW_HINT_BONUS = 1.0 / 6.0   # a row holds 6 cards
COL_HINT_BONUS = 1.0 / 4.0   # a column holds 4 cards

DECAY_MODES = ("recency", "literal")
HINT_MODIFIERS = ("additive", "rescale")


@dataclass
class PlayerSpec:
    """Configuration of a simulated player, serializable as JSON."""

    kind: str = "imperfect"                 # "perfect" | "imperfect"
    d: float = DEFAULT_DECAY
    p_explore: float = DEFAULT_P_EXPLORE
    compliance: float = 1.0
    decay_mode: str = "recency"
    hint_modifier: str = "additive"

    def __post_init__(self) -> None:
        if self.kind not in ("perfect", "imperfect"):
            raise ValueError(f"unknown player kind {self.kind!r}")
        if not 0 <= self.d < 1:
            raise ValueError("decay rate d must be in [0, 1)")
        if not 0 <= self.p_explore <= 1 or not 0 <= self.compliance <= 1:
            raise ValueError("p_explore and compliance must be probabilities")
        if self.decay_mode not in DECAY_MODES:
            raise ValueError(f"decay_mode must be one of {DECAY_MODES}")
        if self.hint_modifier not in HINT_MODIFIERS:
            raise ValueError(f"hint_modifier must be one of {HINT_MODIFIERS}")

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "d": self.d,
            "p_explore": self.p_explore,
            "compliance": self.compliance,
            "decay_mode": self.decay_mode,
            "hint_modifier": self.hint_modifier,
        }

    @staticmethod
    def from_json_dict(data: dict) -> "PlayerSpec":
        return PlayerSpec(**data)

    def build(self, rng: Random) -> "Player":
        if self.kind == "perfect":
            return PerfectPlayer(rng)
        return ImperfectPlayer(self, rng)


@dataclass
class MemoryModel:
    """Decaying memory over flipped locations.

    Recall of a location seen Δ flips ago is (1-d)^Δ ("recency" mode). The
    "literal" mode decays every memory by total flips instead, kept for
    sensitivity analysis.
    """

    d: float
    decay_mode: str = "recency"
    records: dict[int, tuple[int, int]] = field(default_factory=dict)  # cell -> (face_id, flip_index)

    def p_seen(self, loc: Location, nf_now: int) -> float:
        _, last_seen = self.records[loc.cell]
        exponent = nf_now if self.decay_mode == "literal" else nf_now - last_seen
        return (1.0 - self.d) ** exponent

    def knows(self, loc: Location) -> bool:
        return loc.cell in self.records


def observe_flip(memory: MemoryModel, record: FlipRecord) -> MemoryModel:
    """Record or refresh the memory of a flipped card."""
    flip_index = (record.move_index - 1) * 2 + record.flip_in_move
    memory.records[record.location.cell] = (record.face.id, flip_index)
    return memory


@dataclass(frozen=True)
class MatchProbability:
    p: float
    provenance: str   # "not_seen" | "seen" | "hint_row" | "hint_col" | "hint_card"


def match_probability(
    memory: MemoryModel,
    state: GameState,
    first: FlipRecord,
    hint: Optional[Hint] = None,
    hint_modifier: str = "additive",
) -> MatchProbability:
    """Chance the simulated player completes the match on the second flip.

    An unseen partner leaves a uniform guess over the remaining pairs; a seen
    partner scales with recall and play length, clamped to a probability. Hints
    then raise it by the informativeness of the disclosed line, or force it.
    """
    partner = partner_of(state, first.location)
    remaining = N_PAIRS - state.nm
    if not memory.knows(partner):
        p = 1.0 / remaining
        provenance = "not_seen"
    else:
        p = min(1.0, memory.p_seen(partner, state.nf) * state.nf / remaining)
        provenance = "seen"

    action = hint.action if hint is not None else AssistAction.NO_HELP
    if action is AssistAction.SUG_CARD:
        return MatchProbability(1.0, "hint_card")
    if action in (AssistAction.SUG_ROW, AssistAction.SUG_COL):
        bonus = ROW_HINT_BONUS if action is AssistAction.SUG_ROW else COL_HINT_BONUS
        if hint_modifier == "rescale":
            p = p + (1.0 - p) * bonus
        else:
            p = p + bonus
        provenance = "hint_row" if action is AssistAction.SUG_ROW else "hint_col"
    return MatchProbability(min(1.0, max(0.0, p)), provenance)


def _face_down(state: GameState) -> list[int]:
    return [i for i, s in enumerate(state.status) if s is CellStatus.FACE_DOWN]


class Player:
    """Single-owner mutable player state; one instance per game."""

    def first_flip(self, state: GameState, hint: Optional[Hint] = None) -> Location:
        raise NotImplementedError

    def second_flip(self, state: GameState, first: FlipRecord, hint: Optional[Hint] = None) -> Location:
        raise NotImplementedError

    def observe(self, record: FlipRecord) -> None:
        raise NotImplementedError


class PerfectPlayer(Player):
    """Perfect recall, casual search.

    Takes a remembered pair whenever one is on the board; otherwise spends the
    move revealing an unexplored card and then a second card drawn uniformly
    from the remaining face-down cells. Calibrated against the simulated
    baseline of ~25 moves per game; deliberately does not grab a remembered
    partner mid-move (doing so plays near the optimal ~19.3-move bound).
    """

    def __init__(self, rng: Random) -> None:
        self.rng = rng
        self.known_faces: dict[int, int] = {}   # cell -> face_id
        self._planned_second: Optional[int] = None

    def first_flip(self, state: GameState, hint: Optional[Hint] = None) -> Location:
        self._planned_second = None
        by_face: dict[int, list[int]] = {}
        for cell, fid in self.known_faces.items():
            if state.status[cell] is CellStatus.FACE_DOWN:
                by_face.setdefault(fid, []).append(cell)
        for cells in by_face.values():
            if len(cells) == 2:
                first, second = sorted(cells)
                self._planned_second = second
                return Location.from_cell(first)
        face_down = _face_down(state)
        unexplored = [c for c in face_down if c not in self.known_faces]
        return Location.from_cell(self.rng.choice(unexplored or face_down))

    def second_flip(self, state: GameState, first: FlipRecord, hint: Optional[Hint] = None) -> Location:
        if self._planned_second is not None:
            cell = self._planned_second
            self._planned_second = None
            return Location.from_cell(cell)
        return Location.from_cell(self.rng.choice(_face_down(state)))

    def observe(self, record: FlipRecord) -> None:
        self.known_faces[record.location.cell] = record.face.id


class ImperfectPlayer(Player):
    """Memory-decay player; follows hints with the configured compliance."""

    def __init__(self, spec: PlayerSpec, rng: Random) -> None:
        self.spec = spec
        self.rng = rng
        self.memory = MemoryModel(d=spec.d, decay_mode=spec.decay_mode)

    def _follows(self, hint: Optional[Hint]) -> bool:
        if hint is None or hint.is_silent or hint.target is None:
            return False
        if self.spec.compliance >= 1.0:
            return True
        return self.rng.random() < self.spec.compliance

    def first_flip(self, state: GameState, hint: Optional[Hint] = None) -> Location:
        if self._follows(hint):
            assert hint is not None and hint.target is not None
            cells = [c for c in target_cells(hint.target) if state.status[c] is CellStatus.FACE_DOWN]
            if cells:
                return Location.from_cell(self.rng.choice(cells))
        face_down = _face_down(state)
        never = [c for c in face_down if c not in self.memory.records]
        seen = [c for c in face_down if c in self.memory.records]
        if never and (not seen or self.rng.random() < self.spec.p_explore):
            return Location.from_cell(self.rng.choice(never))
        if seen:
            weights = [self.memory.p_seen(Location.from_cell(c), state.nf) for c in seen]
            return Location.from_cell(self.rng.choices(seen, weights=weights)[0])
        return Location.from_cell(self.rng.choice(never))

    def second_flip(self, state: GameState, first: FlipRecord, hint: Optional[Hint] = None) -> Location:
        effective = hint if self._follows(hint) else None
        prob = match_probability(
            self.memory, state, first, effective, hint_modifier=self.spec.hint_modifier,
        )
        partner = partner_of(state, first.location)
        if self.rng.random() < prob.p:
            return partner
        # A failed recall picks among the other face-down cells; a followed
        # row/col hint keeps the pick inside the hinted line, and a line whose
        # only face-down cell is the partner forces the match.
        if effective is not None and effective.target is not None and effective.action is not AssistAction.SUG_CARD:
            candidates = [
                c for c in target_cells(effective.target)
                if state.status[c] is CellStatus.FACE_DOWN and c != partner.cell
            ]
            if not candidates:
                return partner
        else:
            candidates = [c for c in _face_down(state) if c != partner.cell]
            if not candidates:
                return partner
        return Location.from_cell(self.rng.choice(candidates))

    def observe(self, record: FlipRecord) -> None:
        observe_flip(self.memory, record)
