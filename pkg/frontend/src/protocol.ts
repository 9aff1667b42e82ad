// Wire protocol of the play service. The client never derives game facts on
// its own; everything it shows comes from these frames.

export const SCHEMA_VERSION = 1;

export type Condition = "tom" | "notom";
export type DecisionPoint = "first" | "second";
export type CellStatus = "face_down" | "face_up_pending" | "removed";

export interface Face {
  id: number;
  name: string;
}

export interface Loc {
  row: number;
  col: number;
}

export type HintTarget =
  | { kind: "row"; index: number }
  | { kind: "col"; index: number }
  | { kind: "cell"; row: number; col: number };

export interface CellState {
  status: CellStatus;
  face: Face | null;
}

export interface Counters {
  moves: number;
  flips: number;
  matches: number;
}

export interface SessionCreatedFrame {
  type: "session_created";
  schema_version: number;
  session_id: string;
  condition: Condition;
  policy: string;
  seed: number;
  created_at_ms: number;
}

export interface StateSyncFrame {
  type: "state_sync";
  schema_version: number;
  board: CellState[][];
  counters: Counters;
  condition: Condition;
  decision_point: DecisionPoint | null;
}

export interface HintOfferFrame {
  type: "hint_offer";
  schema_version: number;
  decision_point: DecisionPoint;
  action: "no_help" | "sug_col" | "sug_row" | "sug_card";
  target: HintTarget | null;
  explanation?: string;
  phrase?: string;
}

export interface FlipResultFrame {
  type: "flip_result";
  schema_version: number;
  location: Loc;
  face: Face;
  is_second_flip: boolean;
  produced_match: boolean;
  followed: boolean;
  counters: Counters;
  affect: null;
}

export interface GameSummary {
  moves: number;
  flips: number;
  matches: number;
  completion_time_ms: number | null;
  normalized_assistance: number;
  suggestions_offered: number;
  suggestions_followed: number;
  suggestions_led_to_match: number;
  follow_rate: number;
  match_from_hint_rate: number;
}

export interface GameEndFrame {
  type: "game_end";
  schema_version: number;
  summary: GameSummary;
}

export interface ErrorFrame {
  type: "error";
  schema_version: number;
  code: string;
  message: string;
}

export type ServerFrame =
  | SessionCreatedFrame
  | StateSyncFrame
  | HintOfferFrame
  | FlipResultFrame
  | GameEndFrame
  | ErrorFrame;

export interface FlipRequestFrame {
  type: "flip_request";
  schema_version: number;
  location: Loc;
}

export function flipRequest(row: number, col: number): FlipRequestFrame {
  return { type: "flip_request", schema_version: SCHEMA_VERSION, location: { row, col } };
}

const FRAME_TYPES = new Set([
  "session_created",
  "state_sync",
  "hint_offer",
  "flip_result",
  "game_end",
  "error",
]);

export function parseServerFrame(raw: unknown): ServerFrame {
  if (typeof raw !== "object" || raw === null) {
    throw new Error("frame is not an object");
  }
  const frame = raw as Record<string, unknown>;
  if (typeof frame.type !== "string" || !FRAME_TYPES.has(frame.type)) {
    throw new Error(`unknown frame type: ${String(frame.type)}`);
  }
  if (frame.schema_version !== SCHEMA_VERSION) {
    throw new Error(`unsupported schema_version: ${String(frame.schema_version)}`);
  }
  return raw as ServerFrame;
}
