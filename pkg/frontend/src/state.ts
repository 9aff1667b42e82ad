// Client session view: a pure projection of the server frames. No matches,
// partners or hints are ever computed here, which is what makes a frame-log
// replay land on exactly the state (and summary) the live client showed.

import type {
  CellState,
  Condition,
  Counters,
  Face,
  GameSummary,
  HintOfferFrame,
  HintTarget,
  Loc,
  ServerFrame,
} from "./protocol";

export interface MismatchView {
  a: Loc;
  b: Loc;
  faceA: Face;
  faceB: Face;
}

export interface SessionView {
  sessionId: string | null;
  condition: Condition | null;
  board: CellState[][];
  counters: Counters;
  hint: HintOfferFrame | null;
  explanations: string[];
  summary: GameSummary | null;
  lastError: string | null;
  awaitingResult: boolean;
  recentMismatch: MismatchView | null;
  pendingFace: Face | null;
  pendingLoc: Loc | null;
}

export function initialView(): SessionView {
  return {
    sessionId: null,
    condition: null,
    board: [],
    counters: { moves: 0, flips: 0, matches: 0 },
    hint: null,
    explanations: [],
    summary: null,
    lastError: null,
    awaitingResult: false,
    recentMismatch: null,
    pendingFace: null,
    pendingLoc: null,
  };
}

function cloneBoard(board: CellState[][]): CellState[][] {
  return board.map((row) => row.map((cell) => ({ status: cell.status, face: cell.face })));
}

export function applyFrame(view: SessionView, frame: ServerFrame): SessionView {
  switch (frame.type) {
    case "session_created":
      return {
        ...initialView(),
        sessionId: frame.session_id,
        condition: frame.condition,
      };

    case "state_sync":
      return {
        ...view,
        board: cloneBoard(frame.board),
        counters: frame.counters,
        condition: frame.condition,
      };

    case "hint_offer": {
      const explanations =
        frame.explanation !== undefined
          ? [...view.explanations, frame.explanation]
          : view.explanations;
      return { ...view, hint: frame, explanations, lastError: null };
    }

    case "flip_result": {
      const board = cloneBoard(view.board);
      const { row, col } = frame.location;
      const cell = board[row]?.[col];
      if (cell === undefined) {
        return { ...view, lastError: `flip_result outside board: ${row},${col}` };
      }
      let recentMismatch: MismatchView | null = null;
      let pendingFace: Face | null = view.pendingFace;
      let pendingLoc: Loc | null = view.pendingLoc;
      if (!frame.is_second_flip) {
        cell.status = "face_up_pending";
        cell.face = frame.face;
        pendingFace = frame.face;
        pendingLoc = frame.location;
      } else {
        const settled = frame.produced_match ? "removed" : "face_down";
        for (const boardRow of board) {
          for (const other of boardRow) {
            if (other.status === "face_up_pending") {
              other.status = settled;
              if (settled === "face_down") other.face = null;
            }
          }
        }
        cell.status = settled;
        cell.face = settled === "removed" ? frame.face : null;
        if (!frame.produced_match && pendingLoc !== null && pendingFace !== null) {
          recentMismatch = {
            a: pendingLoc,
            b: frame.location,
            faceA: pendingFace,
            faceB: frame.face,
          };
        }
        pendingFace = null;
        pendingLoc = null;
      }
      return {
        ...view,
        board,
        counters: frame.counters,
        awaitingResult: false,
        recentMismatch,
        pendingFace,
        pendingLoc,
      };
    }

    case "game_end":
      return { ...view, summary: frame.summary, hint: null };

    case "error":
      return { ...view, lastError: `${frame.code}: ${frame.message}`, awaitingResult: false };
  }
}

export function markFlipSent(view: SessionView): SessionView {
  return { ...view, awaitingResult: true, recentMismatch: null };
}

// Cells the active hint highlights. Highlighting never reveals a face: it is
// derived from target indices only.
export function highlightedCells(view: SessionView): Set<string> {
  const cells = new Set<string>();
  const target = view.hint?.target ?? null;
  if (target === null || view.board.length === 0) return cells;
  const rows = view.board.length;
  const cols = view.board[0]?.length ?? 0;
  if (target.kind === "row") {
    for (let c = 0; c < cols; c++) cells.add(`${target.index},${c}`);
  } else if (target.kind === "col") {
    for (let r = 0; r < rows; r++) cells.add(`${r},${target.index}`);
  } else {
    cells.add(`${target.row},${target.col}`);
  }
  return cells;
}

export function canFlip(view: SessionView, row: number, col: number): boolean {
  if (view.awaitingResult || view.summary !== null) return false;
  return view.board[row]?.[col]?.status === "face_down";
}
