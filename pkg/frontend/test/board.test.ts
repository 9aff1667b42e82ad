// DOM layer: highlights, the optimistic lock and the mismatch display delay.

import { describe, expect, it } from "vitest";

import { renderBoard, renderHintBanner } from "../src/board";
import { parseServerFrame } from "../src/protocol";
import type { ServerFrame } from "../src/protocol";
import { applyFrame, initialView, markFlipSent } from "../src/state";
import type { SessionView } from "../src/state";

import tomFixture from "./fixtures/session_tom.json";

function syncedView(): SessionView {
  let view = initialView();
  view = applyFrame(view, parseServerFrame((tomFixture as { frames: unknown[] }).frames[0]));
  view = applyFrame(view, parseServerFrame((tomFixture as { frames: unknown[] }).frames[1]));
  return view;
}

const noop = { onFlip: () => undefined };

describe("board rendering", () => {
  it("renders 24 cells, all clickable on a fresh board", () => {
    const root = document.createElement("div");
    renderBoard(root, syncedView(), noop, false);
    const cards = root.querySelectorAll(".card");
    expect(cards).toHaveLength(24);
    expect(root.querySelectorAll(".card:disabled")).toHaveLength(0);
  });

  it("row hints add highlight classes without revealing faces", () => {
    const view = applyFrame(syncedView(), {
      type: "hint_offer",
      schema_version: 1,
      decision_point: "first",
      action: "sug_row",
      target: { kind: "row", index: 1 },
      explanation: "look here",
    } as ServerFrame);
    const root = document.createElement("div");
    renderBoard(root, view, noop, false);
    const hinted = [...root.querySelectorAll(".card.hinted")];
    expect(hinted).toHaveLength(6);
    for (const el of hinted) expect(el.textContent).toBe("");
  });

  it("clicks are suppressed while a flip is in flight", () => {
    let flips = 0;
    const view = markFlipSent(syncedView());
    const root = document.createElement("div");
    renderBoard(root, view, { onFlip: () => flips++ }, false);
    const card = root.querySelector(".card") as HTMLButtonElement;
    card.click();
    expect(flips).toBe(0);
    expect(card.disabled).toBe(true);
  });

  it("mismatched faces stay visible only while the display delay runs", () => {
    let view = syncedView();
    const flips: ServerFrame[] = [
      {
        type: "flip_result", schema_version: 1,
        location: { row: 0, col: 0 }, face: { id: 0, name: "shark" },
        is_second_flip: false, produced_match: false, followed: false,
        counters: { moves: 1, flips: 1, matches: 0 }, affect: null,
      } as ServerFrame,
      {
        type: "flip_result", schema_version: 1,
        location: { row: 0, col: 1 }, face: { id: 1, name: "dolphin" },
        is_second_flip: true, produced_match: false, followed: false,
        counters: { moves: 1, flips: 2, matches: 0 }, affect: null,
      } as ServerFrame,
    ];
    for (const frame of flips) view = applyFrame(view, frame);

    const root = document.createElement("div");
    renderBoard(root, view, noop, true);
    expect(root.querySelectorAll(".card.mismatch")).toHaveLength(2);
    renderBoard(root, view, noop, false);
    expect(root.querySelectorAll(".card.mismatch")).toHaveLength(0);
  });

  it("removed pairs render inert", () => {
    let view = syncedView();
    view = applyFrame(view, {
      type: "flip_result", schema_version: 1,
      location: { row: 0, col: 0 }, face: { id: 0, name: "shark" },
      is_second_flip: false, produced_match: false, followed: false,
      counters: { moves: 1, flips: 1, matches: 0 }, affect: null,
    } as ServerFrame);
    view = applyFrame(view, {
      type: "flip_result", schema_version: 1,
      location: { row: 2, col: 2 }, face: { id: 0, name: "shark" },
      is_second_flip: true, produced_match: true, followed: false,
      counters: { moves: 1, flips: 2, matches: 1 }, affect: null,
    } as ServerFrame);
    const root = document.createElement("div");
    renderBoard(root, view, noop, false);
    const removed = [...root.querySelectorAll(".card.removed")] as HTMLButtonElement[];
    expect(removed).toHaveLength(2);
    for (const el of removed) expect(el.disabled).toBe(true);
  });
});

describe("hint banner", () => {
  it("shows the explanation text verbatim", () => {
    const text = "You have clicked shark several times. Click the one in row 1 and col 2, you should then remember where the other one is located.";
    const view = applyFrame(syncedView(), {
      type: "hint_offer",
      schema_version: 1,
      decision_point: "first",
      action: "sug_card",
      target: { kind: "cell", row: 0, col: 1 },
      explanation: text,
    } as ServerFrame);
    const banner = document.createElement("div");
    renderHintBanner(banner, view);
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain(text);
  });

  it("stays hidden for silent decisions", () => {
    const view = applyFrame(syncedView(), {
      type: "hint_offer",
      schema_version: 1,
      decision_point: "first",
      action: "no_help",
      target: null,
    } as ServerFrame);
    const banner = document.createElement("div");
    renderHintBanner(banner, view);
    expect(banner.hidden).toBe(true);
  });
});
