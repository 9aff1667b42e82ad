// DOM rendering of the session view. Mismatched cards stay visible for a
// moment before hiding again; the delay lives entirely in this display layer,
// the projected view itself is already settled.

import type { SessionView } from "./state";
import { canFlip, highlightedCells } from "./state";

export const MISMATCH_DISPLAY_MS = 1500;

// Face id -> emoji, purely cosmetic.
const FACE_ART = ["🦈", "🐬", "🐙", "🦀", "🐢", "🐧", "🦉", "🦊", "🐨", "🦓", "🐯", "🐼"];

export function faceArt(id: number): string {
  return FACE_ART[id] ?? "❓";
}

export interface BoardHandlers {
  onFlip: (row: number, col: number) => void;
}

export function renderBoard(
  root: HTMLElement,
  view: SessionView,
  handlers: BoardHandlers,
  showMismatch: boolean,
): void {
  const highlights = highlightedCells(view);
  const mismatch = showMismatch ? view.recentMismatch : null;
  root.innerHTML = "";
  const grid = document.createElement("div");
  grid.className = "board";
  view.board.forEach((cells, row) => {
    cells.forEach((cell, col) => {
      const el = document.createElement("button");
      el.className = `card ${cell.status}`;
      el.dataset.row = String(row);
      el.dataset.col = String(col);
      if (highlights.has(`${row},${col}`)) el.classList.add("hinted");

      let face = cell.face;
      if (mismatch !== null && cell.status === "face_down") {
        if (mismatch.a.row === row && mismatch.a.col === col) face = mismatch.faceA;
        if (mismatch.b.row === row && mismatch.b.col === col) face = mismatch.faceB;
        if (face !== null) el.classList.add("mismatch");
      }
      if (face !== null) {
        el.textContent = faceArt(face.id);
        el.title = face.name;
      }
      if (cell.status === "removed") {
        el.disabled = true;
      } else if (canFlip(view, row, col) && face === null) {
        el.addEventListener("click", () => handlers.onFlip(row, col));
      } else if (cell.status === "face_down") {
        el.disabled = true;   // optimistic lock or mismatch pause
      }
      grid.appendChild(el);
    });
  });
  root.appendChild(grid);
}

export function renderHintBanner(root: HTMLElement, view: SessionView): void {
  const hint = view.hint;
  if (hint === null || hint.action === "no_help") {
    root.hidden = true;
    root.textContent = "";
    return;
  }
  root.hidden = false;
  const label = hint.action.replace("sug_", "suggest ");
  const text = hint.explanation ?? hint.phrase ?? "";
  root.textContent = text ? `${label}: ${text}` : label;
}

export function renderCounters(root: HTMLElement, view: SessionView): void {
  const { moves, flips, matches } = view.counters;
  const badge = view.condition === null ? "" : ` · condition: ${view.condition}`;
  root.textContent = `moves ${moves} · flips ${flips} · matches ${matches}/12${badge}`;
}

export function renderSummary(root: HTMLElement, view: SessionView): void {
  const summary = view.summary;
  if (summary === null) {
    root.hidden = true;
    return;
  }
  root.hidden = false;
  const seconds =
    summary.completion_time_ms === null
      ? "-"
      : (summary.completion_time_ms / 1000).toFixed(1) + "s";
  const rows: [string, string][] = [
    ["moves", String(summary.moves)],
    ["time", seconds],
    ["suggestions offered", String(summary.suggestions_offered)],
    ["suggestions followed", String(summary.suggestions_followed)],
    ["normalized assistance", summary.normalized_assistance.toFixed(3)],
  ];
  root.innerHTML =
    "<h2>Game complete!</h2>" +
    "<table>" +
    rows.map(([k, v]) => `<tr><td>${k}</td><td>${v}</td></tr>`).join("") +
    "</table>";
}
