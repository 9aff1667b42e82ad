"""Heuristic mentalising layer.

Folds the flip ledger into per-face/per-location statistics, classifies the
player's move strategy, turns an abstract assistance action into a concrete,
truthful hint target, and renders the explanation for it. The noToM ablation
uses the same machinery but grounds first-card hints randomly and never
explains itself.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from random import Random
from typing import Optional, Union

from .game import (
    COLS,
    N_CELLS,
    N_PAIRS,
    ROWS,
    CardFace,
    CellStatus,
    FlipRecord,
    GameState,
    Location,
    face,
    partner_of,
)
from .mdp import AssistAction


class MoveClass(Enum):
    ZERO_UNKNOWN = 0
    ONE_UNKNOWN = 1
    TWO_UNKNOWN = 2


class ExplanationCase(Enum):
    # first card
    BOTH_SEEN_ONCE = "first_both_seen_once"
    ONE_NEVER_OTHER_MULTI = "first_one_never_other_multi"
    BOTH_MULTI = "first_both_multi"
    ONE_MULTI_OTHER_NEVER = "first_one_multi_other_never"
    # second card
    BOTH_SEEN_ONCE_2 = "second_both_seen_once"
    ONE_MULTI_OTHER_NEVER_2 = "second_one_multi_other_never"
    BOTH_MULTI_2 = "second_both_multi"
    CURRENT_ONCE_OTHER_NEVER_2 = "second_current_once_other_never"
    FALLBACK = "fallback"


@dataclass(frozen=True)
class RowTarget:
    index: int


@dataclass(frozen=True)
class ColTarget:
    index: int


@dataclass(frozen=True)
class CellTarget:
    location: Location


HintTarget = Union[RowTarget, ColTarget, CellTarget]


def target_contains(target: HintTarget, loc: Location) -> bool:
    if isinstance(target, RowTarget):
        return loc.row == target.index
    if isinstance(target, ColTarget):
        return loc.col == target.index
    return loc == target.location


def target_cells(target: HintTarget) -> list[int]:
    if isinstance(target, RowTarget):
        return list(range(target.index * COLS, (target.index + 1) * COLS))
    if isinstance(target, ColTarget):
        return list(range(target.index, N_CELLS, COLS))
    return [target.location.cell]


def place_phrase(target: HintTarget) -> str:
    """Location phrase at the disclosure level of the hint (1-based indices)."""
    if isinstance(target, RowTarget):
        return f"row {target.index + 1}"
    if isinstance(target, ColTarget):
        return f"col {target.index + 1}"
    loc = target.location
    return f"row {loc.row + 1} and col {loc.col + 1}"


@dataclass
class Hint:
    action: AssistAction
    target: Optional[HintTarget]
    mode: str                                  # "tom" | "notom"
    decision_point: str                        # "first" | "second"
    face: Optional[CardFace] = None
    case: Optional[ExplanationCase] = None
    explanation: Optional[str] = None          # ToM motivation; never set in noToM
    phrase: Optional[str] = None               # the utterance shown to the player

    @property
    def is_silent(self) -> bool:
        return self.action is AssistAction.NO_HELP


MODE_TOM = "tom"
MODE_NOTOM = "notom"


class HistoryStats:
    """Flip statistics derived from the ledger, kept incrementally.

    Exactly reconstructible from the game ledger: folding the same records in
    order yields an equal instance.
    """

    def __init__(self) -> None:
        self.loc_flip_count = [0] * N_CELLS
        self.loc_last_flip = [0] * N_CELLS      # 1-based flip index, 0 = never
        self.loc_last_move = [0] * N_CELLS      # 1-based move index, 0 = never
        self.face_flip_count = [0] * N_PAIRS
        self.face_last_flip = [0] * N_PAIRS
        self.face_locs_seen: list[set[int]] = [set() for _ in range(N_PAIRS)]
        self.flips_observed = 0

    def observe(self, record: FlipRecord) -> None:
        cell = record.location.cell
        fid = record.face.id
        self.flips_observed += 1
        self.loc_flip_count[cell] += 1
        self.loc_last_flip[cell] = self.flips_observed
        self.loc_last_move[cell] = record.move_index
        self.face_flip_count[fid] += 1
        self.face_last_flip[fid] = self.flips_observed
        self.face_locs_seen[fid].add(cell)

    @classmethod
    def from_ledger(cls, ledger: list[FlipRecord]) -> "HistoryStats":
        stats = cls()
        for record in ledger:
            stats.observe(record)
        return stats

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HistoryStats):
            return NotImplemented
        return (
            self.loc_flip_count == other.loc_flip_count
            and self.loc_last_flip == other.loc_last_flip
            and self.loc_last_move == other.loc_last_move
            and self.face_flip_count == other.face_flip_count
            and self.face_last_flip == other.face_last_flip
            and self.face_locs_seen == other.face_locs_seen
            and self.flips_observed == other.flips_observed
        )

    def seen_before(self, loc: Location, excluding: tuple[FlipRecord, ...] = ()) -> bool:
        count = self.loc_flip_count[loc.cell]
        count -= sum(1 for r in excluding if r.location == loc)
        return count > 0

    def partner_seen(self, flipped: FlipRecord) -> bool:
        """Was the flipped card's partner location revealed at any earlier point?"""
        return any(cell != flipped.location.cell for cell in self.face_locs_seen[flipped.face.id])


def classify_move(stats: HistoryStats, first: FlipRecord, second: FlipRecord) -> MoveClass:
    """Strategy class of a completed move: how many of its cells were unseen.

    `stats` must already include the move's own two records; their contribution
    is subtracted so only earlier history counts.
    """
    move = (first, second)
    known = sum(1 for r in move if stats.seen_before(r.location, excluding=move))
    return (MoveClass.TWO_UNKNOWN, MoveClass.ONE_UNKNOWN, MoveClass.ZERO_UNKNOWN)[known]


def infer_target_face(
    stats: HistoryStats,
    window: Optional[int] = None,
    eligible: Optional[set[int]] = None,
) -> Optional[CardFace]:
    """The face the player seems to be hunting: most flips within the recency
    window, ties broken by most recent flip. None when nothing qualifies.

    `eligible` restricts candidates (the operational layer passes the faces
    that still have a flippable pair on the board).
    """
    best: Optional[int] = None
    current_move = max(stats.loc_last_move) if window is not None else 0
    for fid in range(N_PAIRS):
        if eligible is not None and fid not in eligible:
            continue
        if not stats.face_locs_seen[fid]:
            continue
        if window is not None:
            recent = any(
                stats.loc_last_move[cell] > current_move - window
                for cell in stats.face_locs_seen[fid]
            )
            if not recent:
                continue
        if best is None:
            best = fid
            continue
        count, tie = stats.face_flip_count[fid], stats.face_last_flip[fid]
        best_count, best_tie = stats.face_flip_count[best], stats.face_last_flip[best]
        if (count, tie) > (best_count, best_tie):
            best = fid
    return None if best is None else face(best)


def _target_for(action: AssistAction, loc: Location) -> HintTarget:
    if action is AssistAction.SUG_ROW:
        return RowTarget(loc.row)
    if action is AssistAction.SUG_COL:
        return ColTarget(loc.col)
    return CellTarget(loc)


def _first_card_case(c_target: int, c_other: int) -> ExplanationCase:
    # Residual count patterns map to the nearest template; see first-card rows
    # of the template table.
    if c_target == 1 and c_other == 1:
        return ExplanationCase.BOTH_SEEN_ONCE
    if c_target == 0 and c_other > 1:
        return ExplanationCase.ONE_NEVER_OTHER_MULTI
    if c_target > 1 and c_other > 1:
        return ExplanationCase.BOTH_MULTI
    return ExplanationCase.ONE_MULTI_OTHER_NEVER


def _second_card_case(c_current: int, c_other: int) -> ExplanationCase:
    # c_current includes the flip that was just made.
    if c_other == 0:
        if c_current <= 1:
            return ExplanationCase.CURRENT_ONCE_OTHER_NEVER_2
        return ExplanationCase.ONE_MULTI_OTHER_NEVER_2
    if c_current > 1 and c_other > 1:
        return ExplanationCase.BOTH_MULTI_2
    return ExplanationCase.BOTH_SEEN_ONCE_2


class TemplateError(Exception):
    """Raised when a template cannot be rendered with the data at hand."""


def load_templates(path: Optional[str] = None) -> dict[str, str]:
    """Explanation templates keyed by case, editable as a JSON file."""
    if path is None:
        text = resources.files("pairmind").joinpath("templates.json").read_text()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    data = json.loads(text)
    missing = {case.value for case in ExplanationCase} - set(data)
    if missing:
        raise TemplateError(f"template file missing cases: {sorted(missing)}")
    return data


_DEFAULT_TEMPLATES: Optional[dict[str, str]] = None


def default_templates() -> dict[str, str]:
    global _DEFAULT_TEMPLATES
    if _DEFAULT_TEMPLATES is None:
        _DEFAULT_TEMPLATES = load_templates()
    return _DEFAULT_TEMPLATES


def render_explanation(
    case: ExplanationCase,
    face_: Optional[CardFace] = None,
    cell: Optional[Location] = None,
    place: Optional[str] = None,
    templates: Optional[dict[str, str]] = None,
) -> str:
    """Fill the fixed template for a case; 1-based row/col in rendered text."""
    templates = templates or default_templates()
    template = templates[case.value]
    values: dict[str, str] = {}
    if face_ is not None:
        values["face"] = face_.name
    if cell is not None:
        values["row"] = str(cell.row + 1)
        values["col"] = str(cell.col + 1)
        values.setdefault("place", f"row {cell.row + 1} and col {cell.col + 1}")
    if place is not None:
        values["place"] = place
    try:
        return template.format(**values)
    except (KeyError, IndexError) as exc:
        raise TemplateError(f"case {case.name} needs placeholder {exc}") from exc


def _face_down_cells(state: GameState) -> list[int]:
    return [i for i, s in enumerate(state.status) if s is CellStatus.FACE_DOWN]


def operationalize_first(
    action: AssistAction,
    stats: HistoryStats,
    state: GameState,
    mode: str,
    rng: Random,
    window: Optional[int] = None,
    templates: Optional[dict[str, str]] = None,
) -> Hint:
    """Ground a first-card assistance action into a hint.

    ToM: target the less-known location of the face the player is hunting and
    explain why. noToM: target a uniformly random face-down cell, no motivation.
    """
    if action is AssistAction.NO_HELP:
        return Hint(action, None, mode, "first")

    if mode == MODE_NOTOM:
        cell = Location.from_cell(rng.choice(_face_down_cells(state)))
        target = _target_for(action, cell)
        return Hint(
            action, target, mode, "first",
            phrase=f"Try to flip a card in {place_phrase(target)}.",
        )

    # Faces with both cards still on the board and at least one sighting.
    eligible = {
        fid for fid in range(N_PAIRS)
        if stats.face_locs_seen[fid]
        and all(
            state.status[cell] is CellStatus.FACE_DOWN
            for cell, f in enumerate(state.layout)
            if f == fid
        )
    }
    hunted = infer_target_face(stats, window=window, eligible=eligible)
    if hunted is None:
        cell = Location.from_cell(rng.choice(_face_down_cells(state)))
        target = _target_for(action, cell)
        text = render_explanation(
            ExplanationCase.FALLBACK, place=place_phrase(target), templates=templates,
        )
        return Hint(
            action, target, mode, "first",
            case=ExplanationCase.FALLBACK, explanation=text, phrase=text,
        )

    pair = [cell for cell, f in enumerate(state.layout) if f == hunted.id]
    counts = [stats.loc_flip_count[c] for c in pair]
    # Suggest the location the player knows less: unseen or less flipped,
    # ties broken towards the less recently seen one.
    order = sorted(
        range(2),
        key=lambda i: (counts[i], stats.loc_last_flip[pair[i]]),
    )
    target_cell, other_cell = pair[order[0]], pair[order[1]]
    loc = Location.from_cell(target_cell)
    target = _target_for(action, loc)
    case = _first_card_case(stats.loc_flip_count[target_cell], stats.loc_flip_count[other_cell])
    text = render_explanation(
        case, face_=hunted, cell=loc, place=place_phrase(target), templates=templates,
    )
    return Hint(
        action, target, mode, "first",
        face=hunted, case=case, explanation=text, phrase=text,
    )


def operationalize_second(
    action: AssistAction,
    first: FlipRecord,
    stats: HistoryStats,
    state: GameState,
    mode: str,
    templates: Optional[dict[str, str]] = None,
) -> Hint:
    """Ground a second-card action: always points at the true partner of the
    card just flipped, whether or not the player has seen it.
    """
    if action is AssistAction.NO_HELP:
        return Hint(action, None, mode, "second")

    partner = partner_of(state, first.location)
    target = _target_for(action, partner)
    if mode == MODE_NOTOM:
        return Hint(
            action, target, mode, "second",
            phrase=f"The matching card is located in {place_phrase(target)}.",
        )

    c_current = stats.loc_flip_count[first.location.cell]
    c_other = stats.loc_flip_count[partner.cell]
    case = _second_card_case(c_current, c_other)
    text = render_explanation(
        case, face_=first.face, cell=partner, place=place_phrase(target), templates=templates,
    )
    return Hint(
        action, target, mode, "second",
        face=first.face, case=case, explanation=text, phrase=text,
    )


def first_flip_outcome(hint: Optional[Hint], flipped: FlipRecord, stats: HistoryStats) -> bool:
    """Convention for first-flip correctness: the flip is "correct" when a
    match is attainable from memory (the partner location was revealed before)
    or the flip followed a given hint target. Returns True for correct.

    `stats` may already include the flip itself; the partner is a different
    cell so its counts are unaffected.
    """
    if hint is not None and hint.target is not None and target_contains(hint.target, flipped.location):
        return True
    return stats.partner_seen(flipped)
