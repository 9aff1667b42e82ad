"""Rules engine for the 24-card Concentration game.

The board is a fixed 4x6 grid holding 12 faces twice each. One "flip" reveals a
single card; a "move" is two consecutive flips. The engine keeps an append-only
ledger of every flip, which is the single source of truth the memory models,
the mentalising layer and the session logs are all derived from.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from random import Random
from typing import Iterable, NamedTuple, Optional

ROWS = 4
COLS = 6
N_CELLS = ROWS * COLS
N_PAIRS = 12

FACE_NAMES = (
    "shark", "dolphin", "octopus", "crab", "turtle", "penguin",
    "owl", "fox", "koala", "zebra", "tiger", "panda",
)


class FlipNotAllowed(Exception):
    """Raised when a flip targets a cell that is not currently face down."""


class CellStatus(Enum):
    FACE_DOWN = "face_down"
    FACE_UP_PENDING = "face_up_pending"
    REMOVED = "removed"


class Location(NamedTuple):
    row: int
    col: int

    @property
    def cell(self) -> int:
        return self.row * COLS + self.col

    @staticmethod
    def from_cell(cell: int) -> "Location":
        return Location(cell // COLS, cell % COLS)


class CardFace(NamedTuple):
    id: int
    name: str


def face(face_id: int) -> CardFace:
    return CardFace(face_id, FACE_NAMES[face_id])


@dataclass(frozen=True)
class FlipRecord:
    move_index: int          # 1-based, increments every two flips
    flip_in_move: int        # 1 or 2
    location: Location
    face: CardFace
    produced_match: Optional[bool]  # defined only for flip_in_move == 2


@dataclass
class FlipOutcome:
    revealed_face: CardFace
    is_second_flip: bool
    produced_match: bool
    state: "GameState"


@dataclass
class GameState:
    rng_seed: int
    layout: list[int]                      # cell index -> face id (hidden ground truth)
    status: list[CellStatus]
    nm: int = 0                            # matches found
    nf: int = 0                            # total flips
    nf_since_match: int = 0
    ledger: list[FlipRecord] = field(default_factory=list)
    _pending: Optional[int] = None         # cell index of the FaceUpPending card

    @property
    def complete(self) -> bool:
        return self.nm == N_PAIRS

    @property
    def pending_location(self) -> Optional[Location]:
        return None if self._pending is None else Location.from_cell(self._pending)

    def face_at(self, loc: Location) -> CardFace:
        return face(self.layout[loc.cell])


def new_game(seed: int) -> GameState:
    """Build a fresh board: 12 faces placed twice each via a seeded shuffle."""
    rng = Random(seed)
    layout = list(range(N_PAIRS)) * 2
    rng.shuffle(layout)
    return GameState(
        rng_seed=seed,
        layout=layout,
        status=[CellStatus.FACE_DOWN] * N_CELLS,
    )


def partner_of(state: GameState, loc: Location) -> Location:
    """The unique other location holding the same face (ground-truth lookup)."""
    cell = loc.cell
    if not 0 <= cell < N_CELLS:
        raise ValueError(f"location {loc} outside the {ROWS}x{COLS} grid")
    target = state.layout[cell]
    for other, fid in enumerate(state.layout):
        if fid == target and other != cell:
            return Location.from_cell(other)
    raise AssertionError("layout invariant broken: face present only once")


def face_down_locations(state: GameState) -> set[Location]:
    return {
        Location.from_cell(i)
        for i, s in enumerate(state.status)
        if s is CellStatus.FACE_DOWN
    }


def flip(state: GameState, loc: Location) -> FlipOutcome:
    """Reveal one card. Second flips resolve the move: match removes the pair,
    mismatch turns both back face down immediately (display delay is a UI concern).
    """
    if not (0 <= loc.row < ROWS and 0 <= loc.col < COLS):
        raise FlipNotAllowed(f"location {loc} outside the {ROWS}x{COLS} grid")
    cell = loc.cell
    status = state.status[cell]
    if status is CellStatus.REMOVED:
        raise FlipNotAllowed(f"card at {loc} has already been matched")
    if status is CellStatus.FACE_UP_PENDING:
        raise FlipNotAllowed(f"card at {loc} is already face up")

    state.nf += 1
    state.nf_since_match += 1
    revealed = face(state.layout[cell])

    if state._pending is None:
        state.status[cell] = CellStatus.FACE_UP_PENDING
        state._pending = cell
        record = FlipRecord(
            move_index=(state.nf + 1) // 2,
            flip_in_move=1,
            location=loc,
            face=revealed,
            produced_match=None,
        )
        state.ledger.append(record)
        return FlipOutcome(revealed, False, False, state)

    first_cell = state._pending
    produced_match = state.layout[first_cell] == state.layout[cell]
    if produced_match:
        state.status[first_cell] = CellStatus.REMOVED
        state.status[cell] = CellStatus.REMOVED
        state.nm += 1
        state.nf_since_match = 0
    else:
        state.status[first_cell] = CellStatus.FACE_DOWN
        state.status[cell] = CellStatus.FACE_DOWN
    state._pending = None
    record = FlipRecord(
        move_index=(state.nf + 1) // 2,
        flip_in_move=2,
        location=loc,
        face=revealed,
        produced_match=produced_match,
    )
    state.ledger.append(record)
    return FlipOutcome(revealed, True, produced_match, state)


def game_summary(state: GameState, duration_ms: Optional[int] = None) -> dict:
    return {
        "moves": state.nf // 2,
        "flips": state.nf,
        "matches": state.nm,
        "duration_ms": duration_ms,
    }


def replay(seed: int, flips: Iterable[Location]) -> GameState:
    """Rebuild a game state by replaying a flip sequence (event-sourcing round trip)."""
    state = new_game(seed)
    for loc in flips:
        flip(state, loc)
    return state


# --- golden layout files and ledger export ---

def layout_as_grid(state: GameState) -> list[list[int]]:
    return [state.layout[r * COLS:(r + 1) * COLS] for r in range(ROWS)]


def dump_layout(state: GameState) -> str:
    return json.dumps({"seed": state.rng_seed, "grid": layout_as_grid(state)}, sort_keys=True)


def load_layout(text: str) -> GameState:
    data = json.loads(text)
    grid = data["grid"]
    if len(grid) != ROWS or any(len(row) != COLS for row in grid):
        raise ValueError(f"layout grid must be {ROWS}x{COLS}")
    layout = [fid for row in grid for fid in row]
    if sorted(layout) != sorted(list(range(N_PAIRS)) * 2):
        raise ValueError("layout must hold each of the 12 faces exactly twice")
    return GameState(
        rng_seed=data["seed"],
        layout=layout,
        status=[CellStatus.FACE_DOWN] * N_CELLS,
    )


def record_to_json(record: FlipRecord) -> dict:
    return {
        "move_index": record.move_index,
        "flip_in_move": record.flip_in_move,
        "location": {"row": record.location.row, "col": record.location.col},
        "face": {"id": record.face.id, "name": record.face.name},
        "produced_match": record.produced_match,
    }


def dump_ledger(state: GameState) -> str:
    """Ledger export as JSONL, one FlipRecord per line."""
    return "".join(json.dumps(record_to_json(r), sort_keys=True) + "\n" for r in state.ledger)
