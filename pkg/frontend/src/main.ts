// Wiring: setup screen -> live session. The experimenter picks the condition
// and policy up front; during play only the board, counters and hint banner
// are visible.

import {
  MISMATCH_DISPLAY_MS,
  renderBoard,
  renderCounters,
  renderHintBanner,
  renderSummary,
} from "./board";
import { connectChannel, createSession, fetchPolicies } from "./net";
import { flipRequest, parseServerFrame } from "./protocol";
import type { Condition } from "./protocol";
import { applyFrame, initialView, markFlipSent } from "./state";
import type { SessionView } from "./state";

const setupEl = document.getElementById("setup") as HTMLElement;
const playEl = document.getElementById("play") as HTMLElement;
const boardEl = document.getElementById("board") as HTMLElement;
const hintEl = document.getElementById("hint") as HTMLElement;
const countersEl = document.getElementById("counters") as HTMLElement;
const summaryEl = document.getElementById("summary") as HTMLElement;
const errorEl = document.getElementById("error") as HTMLElement;
const policySelect = document.getElementById("policy") as HTMLSelectElement;
const conditionSelect = document.getElementById("condition") as HTMLSelectElement;
const seedInput = document.getElementById("seed") as HTMLInputElement;
const startButton = document.getElementById("start") as HTMLButtonElement;

let view: SessionView = initialView();
let socket: WebSocket | null = null;
let mismatchTimer: number | null = null;

function render(showMismatch = false): void {
  renderBoard(boardEl, view, { onFlip: sendFlip }, showMismatch);
  renderHintBanner(hintEl, view);
  renderCounters(countersEl, view);
  renderSummary(summaryEl, view);
  errorEl.hidden = view.lastError === null;
  errorEl.textContent = view.lastError ?? "";
}

function sendFlip(row: number, col: number): void {
  if (socket === null || view.awaitingResult) return;
  view = markFlipSent(view);
  socket.send(JSON.stringify(flipRequest(row, col)));
  render();
}

function handleMessage(event: MessageEvent): void {
  const frame = parseServerFrame(JSON.parse(event.data as string));
  view = applyFrame(view, frame);
  if (view.recentMismatch !== null) {
    // show both faces briefly; the engine has already turned them down
    render(true);
    if (mismatchTimer !== null) window.clearTimeout(mismatchTimer);
    mismatchTimer = window.setTimeout(() => render(false), MISMATCH_DISPLAY_MS);
    return;
  }
  render();
}

async function start(): Promise<void> {
  const condition = conditionSelect.value as Condition;
  const policy = policySelect.value;
  const seedText = seedInput.value.trim();
  const seed = seedText === "" ? null : Number(seedText);
  startButton.disabled = true;
  try {
    const created = await createSession(condition, policy, seed);
    view = applyFrame(initialView(), created);
    socket = connectChannel(created.session_id);
    socket.addEventListener("message", handleMessage);
    socket.addEventListener("close", () => {
      startButton.disabled = false;
    });
    setupEl.hidden = true;
    playEl.hidden = false;
    render();
  } catch (err) {
    errorEl.hidden = false;
    errorEl.textContent = String(err);
    startButton.disabled = false;
  }
}

async function loadSetup(): Promise<void> {
  try {
    const policies = await fetchPolicies();
    policySelect.innerHTML = "";
    for (const entry of policies.filter((p) => p.valid)) {
      const option = document.createElement("option");
      option.value = entry.name;
      option.textContent = entry.name;
      policySelect.appendChild(option);
    }
    if (policySelect.options.length === 0) {
      errorEl.hidden = false;
      errorEl.textContent = "no valid policies in the service's policy directory";
    }
  } catch (err) {
    errorEl.hidden = false;
    errorEl.textContent = String(err);
  }
}

startButton.addEventListener("click", () => void start());
void loadSetup();
