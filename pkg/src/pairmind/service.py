"""Live-play session server.

Session management over HTTP, gameplay over a websocket channel pushing JSON
frames: the server owns the hidden layout, runs the trained policy plus the
mentalising layer per session, proactively offers a hint at every decision
point, answers each flip request with exactly one result frame, and logs every
frame to a per-session JSONL file that replays to the same summary.
"""

from __future__ import annotations

import asyncio
import json
import os
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from random import Random
from typing import Optional

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from pydantic import BaseModel

from .game import (
    CellStatus,
    COLS,
    FlipNotAllowed,
    FlipRecord,
    GameState,
    Location,
    ROWS,
    flip,
    game_summary,
    new_game,
)
from .mdp import (
    AssistAction,
    INITIAL_STATE,
    MdpState,
    PrevOutcome,
    phase_of,
)
from .mentalising import (
    CellTarget,
    ColTarget,
    Hint,
    HistoryStats,
    MODE_NOTOM,
    MODE_TOM,
    RowTarget,
    default_templates,
    first_flip_outcome,
    operationalize_first,
    operationalize_second,
    target_contains,
)
from .metrics import normalized_assistance
from .qlearn import QTable, load_qtable
from .episodes import greedy_policy_fn

SCHEMA_VERSION = 1

CONDITIONS = (MODE_TOM, MODE_NOTOM)


def _target_to_json(target) -> Optional[dict]:
    if target is None:
        return None
    if isinstance(target, RowTarget):
        return {"kind": "row", "index": target.index}
    if isinstance(target, ColTarget):
        return {"kind": "col", "index": target.index}
    if isinstance(target, CellTarget):
        return {"kind": "cell", "row": target.location.row, "col": target.location.col}
    raise TypeError(f"unknown hint target {target!r}")


class SessionCore:
    """Transport-independent session state machine.

    The exact engine + mentalising pipeline the simulator uses, driven one flip
    at a time. The websocket handler, the log replayer and any scripted client
    all run this same class, which is what makes their summaries agree.
    """

    def __init__(
        self,
        condition: str,
        qtable: QTable,
        seed: int,
        window: Optional[int] = None,
    ) -> None:
        if condition not in CONDITIONS:
            raise ValueError(f"condition must be one of {CONDITIONS}")
        self.condition = condition
        self.qtable = qtable
        self.seed = seed
        self.window = window
        self.game: GameState = new_game(seed)
        self.stats = HistoryStats()
        self.rng = Random(f"session:{seed}")
        self.templates = default_templates()
        self._policy = greedy_policy_fn(qtable.values)
        self.mdp_state: MdpState = INITIAL_STATE
        self._phase_at_move = phase_of(0)
        self._s2: Optional[MdpState] = None
        self._first_record: Optional[FlipRecord] = None
        self._pending_hint: Optional[Hint] = None
        self.assist_actions: list[AssistAction] = []
        self.suggestions_offered = 0
        self.suggestions_followed = 0
        self.suggestions_led_to_match = 0
        self._first_hint_followed = False
        self._last_first_hint: Optional[Hint] = None

    @property
    def decision_point(self) -> str:
        return "second" if self.game.pending_location is not None else "first"

    def next_hint(self) -> Hint:
        """Hint for the current decision point (computed once per decision)."""
        if self.game.complete:
            raise RuntimeError("game already complete")
        if self._pending_hint is not None:
            return self._pending_hint
        if self.decision_point == "first":
            self._phase_at_move = phase_of(self.game.nm)
            action = self._policy(self.mdp_state, "first")
            hint = operationalize_first(
                action, self.stats, self.game, self.condition, self.rng,
                window=self.window, templates=self.templates,
            )
        else:
            assert self._s2 is not None and self._first_record is not None
            action = self._policy(self._s2, "second")
            hint = operationalize_second(
                action, self._first_record, self.stats, self.game, self.condition,
                templates=self.templates,
            )
        self.assist_actions.append(action)
        if not hint.is_silent:
            self.suggestions_offered += 1
        self._pending_hint = hint
        return hint

    def handle_flip(self, loc: Location) -> dict:
        """Apply one flip; raises FlipNotAllowed for illegal requests
        (state is untouched in that case)."""
        hint = self.next_hint()   # ensures the decision's hint exists
        decision = self.decision_point
        outcome = flip(self.game, loc)
        record = self.game.ledger[-1]
        self.stats.observe(record)
        self._pending_hint = None

        followed = hint.target is not None and target_contains(hint.target, loc)
        if not hint.is_silent and followed:
            self.suggestions_followed += 1

        if decision == "first":
            self._first_record = record
            self._last_first_hint = None if hint.is_silent else hint
            self._first_hint_followed = followed and not hint.is_silent
            ok = first_flip_outcome(
                None if hint.is_silent else hint, record, self.stats,
            )
            outcome_enum = PrevOutcome.F_CORRECT if ok else PrevOutcome.F_WRONG
            self._s2 = MdpState(self._phase_at_move, hint.action, outcome_enum)
        else:
            if outcome.produced_match:
                if self._first_hint_followed:
                    self.suggestions_led_to_match += 1
                if not hint.is_silent and followed:
                    self.suggestions_led_to_match += 1
            outcome_enum = (
                PrevOutcome.S_CORRECT if outcome.produced_match else PrevOutcome.S_WRONG
            )
            if not self.game.complete:
                self.mdp_state = MdpState(phase_of(self.game.nm), hint.action, outcome_enum)
            self._s2 = None
            self._first_record = None
            self._first_hint_followed = False
            self._last_first_hint = None

        return {
            "record": record,
            "is_second_flip": outcome.is_second_flip,
            "produced_match": outcome.produced_match,
            "followed": followed,
        }

    def board_view(self) -> list[list[dict]]:
        """Client-facing board: faces only where the card is up or matched."""
        rows = []
        for r in range(ROWS):
            row = []
            for c in range(COLS):
                loc = Location(r, c)
                status = self.game.status[loc.cell]
                cell: dict = {"status": status.value, "face": None}
                if status is not CellStatus.FACE_DOWN:
                    f = self.game.face_at(loc)
                    cell["face"] = {"id": f.id, "name": f.name}
                row.append(cell)
            rows.append(row)
        return rows

    def counters(self) -> dict:
        return {
            "moves": self.game.nf // 2,
            "flips": self.game.nf,
            "matches": self.game.nm,
        }

    def summary(self, completion_time_ms: Optional[int]) -> dict:
        base = game_summary(self.game, duration_ms=completion_time_ms)
        offered = self.suggestions_offered
        return {
            "moves": base["moves"],
            "flips": base["flips"],
            "matches": base["matches"],
            "completion_time_ms": completion_time_ms,
            "normalized_assistance": normalized_assistance(self.assist_actions),
            "suggestions_offered": offered,
            "suggestions_followed": self.suggestions_followed,
            "suggestions_led_to_match": self.suggestions_led_to_match,
            "follow_rate": (self.suggestions_followed / offered) if offered else 0.0,
            "match_from_hint_rate": (self.suggestions_led_to_match / offered) if offered else 0.0,
        }


# --- frames ---

def frame(type_: str, **fields) -> dict:
    return {"type": type_, "schema_version": SCHEMA_VERSION, **fields}


def hint_frame(hint: Hint) -> dict:
    payload = frame(
        "hint_offer",
        decision_point=hint.decision_point,
        action=hint.action.name.lower(),
        target=_target_to_json(hint.target),
    )
    if hint.phrase is not None:
        payload["phrase"] = hint.phrase
    if hint.explanation is not None:
        payload["explanation"] = hint.explanation
    return payload


def flip_result_frame(result: dict, counters: dict) -> dict:
    record: FlipRecord = result["record"]
    return frame(
        "flip_result",
        location={"row": record.location.row, "col": record.location.col},
        face={"id": record.face.id, "name": record.face.name},
        is_second_flip=result["is_second_flip"],
        produced_match=result["produced_match"],
        followed=result["followed"],
        counters=counters,
        affect=None,   # reserved; no behaviour specified
    )


@dataclass
class LiveSession:
    id: str
    core: SessionCore
    policy_name: str
    log_path: Path
    created_monotonic: float
    created_at_ms: int
    lock: asyncio.Lock = field(default_factory=asyncio.Lock)
    finished: bool = False

    def log_frame(self, direction: str, payload: dict) -> None:
        line = json.dumps(
            {"ts_ms": int(time.time() * 1000), "dir": direction, "frame": payload},
            sort_keys=True,
        )
        with open(self.log_path, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")


def list_policies(policy_dir: str) -> list[dict]:
    """Catalog of loadable Q-table files with their meta; invalid files are
    listed with the reason instead of being hidden."""
    catalog = []
    root = Path(policy_dir)
    if not root.is_dir():
        return catalog
    for path in sorted(root.glob("*.json")):
        entry: dict = {"name": path.stem}
        try:
            table = load_qtable(str(path))
            entry["valid"] = True
            entry["meta"] = table.meta
        except Exception as exc:
            entry["valid"] = False
            entry["reason"] = str(exc)
        catalog.append(entry)
    return catalog


class CreateSessionRequest(BaseModel):
    condition: str
    policy: str
    seed: Optional[int] = None


def create_app(policy_dir: str, log_dir: str) -> FastAPI:
    app = FastAPI(title="pairmind play service")
    sessions: dict[str, LiveSession] = {}
    os.makedirs(log_dir, exist_ok=True)

    def load_policy(name: str) -> QTable:
        path = Path(policy_dir) / f"{name}.json"
        if not path.is_file():
            raise HTTPException(status_code=404, detail=f"unknown policy {name!r}")
        try:
            return load_qtable(str(path))
        except Exception as exc:
            raise HTTPException(status_code=400, detail=f"policy {name!r} invalid: {exc}")

    @app.get("/policies")
    def policies() -> dict:
        return {"policies": list_policies(policy_dir)}

    @app.get("/templates")
    def templates() -> dict:
        return default_templates()

    @app.post("/sessions")
    def create_session(request: CreateSessionRequest) -> dict:
        if request.condition not in CONDITIONS:
            raise HTTPException(status_code=422, detail=f"condition must be one of {CONDITIONS}")
        table = load_policy(request.policy)
        seed = request.seed if request.seed is not None else int.from_bytes(os.urandom(6), "big")
        session_id = uuid.uuid4().hex
        core = SessionCore(request.condition, table, seed)
        session = LiveSession(
            id=session_id,
            core=core,
            policy_name=request.policy,
            log_path=Path(log_dir) / f"{session_id}.jsonl",
            created_monotonic=time.monotonic(),
            created_at_ms=int(time.time() * 1000),
        )
        sessions[session_id] = session
        created = frame(
            "session_created",
            session_id=session_id,
            condition=request.condition,
            policy=request.policy,
            seed=seed,
            created_at_ms=session.created_at_ms,
        )
        session.log_frame("out", created)
        return created

    def state_sync_frame(session: LiveSession) -> dict:
        return frame(
            "state_sync",
            board=session.core.board_view(),
            counters=session.core.counters(),
            condition=session.core.condition,
            decision_point=None if session.core.game.complete else session.core.decision_point,
        )

    async def push(ws: WebSocket, session: LiveSession, payload: dict) -> None:
        session.log_frame("out", payload)
        await ws.send_json(payload)

    @app.websocket("/sessions/{session_id}/channel")
    async def channel(ws: WebSocket, session_id: str) -> None:
        await ws.accept()
        session = sessions.get(session_id)
        if session is None:
            await ws.send_json(frame("error", code="unknown_session", message=session_id))
            await ws.close()
            return
        try:
            async with session.lock:
                await push(ws, session, state_sync_frame(session))
                if not session.core.game.complete:
                    await push(ws, session, hint_frame(session.core.next_hint()))
            while True:
                raw = await ws.receive_json()
                async with session.lock:
                    session.log_frame("in", raw)
                    if raw.get("type") != "flip_request":
                        await push(ws, session, frame(
                            "error", code="unexpected_frame",
                            message=f"expected flip_request, got {raw.get('type')!r}",
                        ))
                        continue
                    if raw.get("schema_version") != SCHEMA_VERSION:
                        await push(ws, session, frame(
                            "error", code="bad_schema_version",
                            message=f"frames must carry schema_version={SCHEMA_VERSION}",
                        ))
                        continue
                    if session.finished:
                        await push(ws, session, frame(
                            "error", code="game_over", message="session already finished",
                        ))
                        continue
                    try:
                        loc = Location(int(raw["location"]["row"]), int(raw["location"]["col"]))
                    except (KeyError, TypeError, ValueError):
                        await push(ws, session, frame(
                            "error", code="bad_request", message="malformed flip_request",
                        ))
                        continue
                    try:
                        result = session.core.handle_flip(loc)
                    except FlipNotAllowed as exc:
                        await push(ws, session, frame(
                            "error", code="flip_not_allowed", message=str(exc),
                        ))
                        continue
                    await push(ws, session, flip_result_frame(result, session.core.counters()))
                    if session.core.game.complete:
                        session.finished = True
                        elapsed_ms = int((time.monotonic() - session.created_monotonic) * 1000)
                        await push(ws, session, frame(
                            "game_end", summary=session.core.summary(elapsed_ms),
                        ))
                    else:
                        await push(ws, session, hint_frame(session.core.next_hint()))
        except WebSocketDisconnect:
            return

    return app


def replay_session_log(log_path: str, qtable: QTable) -> dict:
    """Re-run a logged session deterministically and return the final summary.

    The log's session_created frame carries the seed and condition; replaying
    the logged flip requests through a fresh SessionCore must land on the
    summary the live session reported.
    """
    created: Optional[dict] = None
    flips: list[Location] = []
    logged_summary: Optional[dict] = None
    with open(log_path, encoding="utf-8") as fh:
        for line in fh:
            entry = json.loads(line)
            payload = entry["frame"]
            if payload["type"] == "session_created":
                created = payload
            elif payload["type"] == "flip_request" and entry["dir"] == "in":
                flips.append(Location(payload["location"]["row"], payload["location"]["col"]))
            elif payload["type"] == "game_end":
                logged_summary = payload["summary"]
    if created is None:
        raise ValueError("log holds no session_created frame")
    core = SessionCore(created["condition"], qtable, created["seed"])
    for loc in flips:
        core.next_hint()
        try:
            core.handle_flip(loc)
        except FlipNotAllowed:
            continue   # illegal requests were rejected live; skip them the same way
    replayed = core.summary(completion_time_ms=None)
    if logged_summary is not None:
        comparable = {k: v for k, v in logged_summary.items() if k != "completion_time_ms"}
        mismatch = {
            k: (v, replayed.get(k)) for k, v in comparable.items() if replayed.get(k) != v
        }
        if mismatch:
            raise ValueError(f"replay diverged from logged summary: {mismatch}")
    return replayed
