// Template-audit page: every explanation template the assistant can utter,
// rendered verbatim with sample values.

import { renderAuditEntries } from "./templates";
import type { TemplateMap } from "./templates";

export function renderAuditList(root: HTMLElement, templates: TemplateMap): void {
  root.innerHTML = "";
  for (const entry of renderAuditEntries(templates)) {
    const item = document.createElement("li");
    const name = document.createElement("code");
    name.textContent = entry.case;
    const text = document.createElement("blockquote");
    text.textContent = entry.text;
    item.appendChild(name);
    item.appendChild(text);
    root.appendChild(item);
  }
}

async function load(): Promise<void> {
  const root = document.getElementById("audit-list") as HTMLElement;
  const response = await fetch("/templates");
  if (!response.ok) {
    root.textContent = `cannot load templates: ${response.status}`;
    return;
  }
  renderAuditList(root, (await response.json()) as TemplateMap);
}

if (document.getElementById("audit-list") !== null) {
  void load();
}
