// Thin REST + websocket client for the play service.

import type { Condition, SessionCreatedFrame } from "./protocol";

export interface PolicyEntry {
  name: string;
  valid: boolean;
  reason?: string;
}

export async function fetchPolicies(): Promise<PolicyEntry[]> {
  const response = await fetch("/policies");
  if (!response.ok) throw new Error(`GET /policies: ${response.status}`);
  const data = (await response.json()) as { policies: PolicyEntry[] };
  return data.policies;
}

export async function createSession(
  condition: Condition,
  policy: string,
  seed: number | null,
): Promise<SessionCreatedFrame> {
  const body: Record<string, unknown> = { condition, policy };
  if (seed !== null) body.seed = seed;
  const response = await fetch("/sessions", {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
  if (!response.ok) {
    throw new Error(`POST /sessions: ${response.status} ${await response.text()}`);
  }
  return (await response.json()) as SessionCreatedFrame;
}

export function connectChannel(sessionId: string): WebSocket {
  const scheme = location.protocol === "https:" ? "wss" : "ws";
  return new WebSocket(`${scheme}://${location.host}/sessions/${sessionId}/channel`);
}
