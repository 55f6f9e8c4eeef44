/**
 * DOM wiring for the prover page: theorem entry, goal queue, hypothesis
 * list with per-shape affordances, tactic palette, history with undo, and
 * artifact export once the session is terminal.
 */

import { ApiError, MinilogClient } from "./api.js";
import * as model from "./model.js";
import { goalPalette, hypothesisAction } from "./palette.js";

const API_BASE = (window as any).MINILOG_API ?? "http://127.0.0.1:8621";
const client = new MinilogClient(API_BASE);

let view: model.ViewState = model.empty;

const el = (id: string) => document.getElementById(id)!;
const input = () => el("command") as HTMLInputElement;

function download(name: string, text: string) {
  const url = URL.createObjectURL(new Blob([text], { type: "text/plain" }));
  const a = document.createElement("a");
  a.href = url;
  a.download = name;
  a.click();
  URL.revokeObjectURL(url);
}

function render() {
  const state = view.state;
  el("session-panel").hidden = state === null;

  const banner = el("error-banner");
  banner.textContent = view.error ?? "";
  banner.hidden = view.error === null;

  const goals = el("goals");
  goals.replaceChildren();
  if (state) {
    state.goals.forEach((text, i) => {
      const li = document.createElement("li");
      li.textContent = text;
      if (i === 0) li.classList.add("current");
      goals.appendChild(li);
    });
    if (state.terminal) {
      const li = document.createElement("li");
      li.textContent = "no goals — proof complete";
      li.classList.add("terminal");
      goals.appendChild(li);
    }
  }

  const hyps = el("hypotheses");
  hyps.replaceChildren();
  const goal = model.currentGoal(view);
  for (const h of goal?.hypotheses ?? []) {
    const li = document.createElement("li");
    const name = document.createElement("code");
    name.textContent = `${h.label}: ${h.text}`;
    li.appendChild(name);
    const action = hypothesisAction(h);
    if (action) {
      const btn = document.createElement("button");
      btn.textContent = action.label;
      btn.addEventListener("click", () => {
        input().value = action.insert;
        input().focus();
      });
      li.appendChild(btn);
    }
    hyps.appendChild(li);
  }

  const palette = el("palette");
  palette.replaceChildren();
  for (const b of goalPalette(model.isTerminal(view) ? null : goal)) {
    const btn = document.createElement("button");
    btn.textContent = b.label;
    btn.disabled = !b.enabled;
    btn.addEventListener("click", () => {
      input().value = b.insert;
      input().focus();
    });
    palette.appendChild(btn);
  }

  const history = el("history");
  history.replaceChildren();
  for (const cmd of view.history) {
    const li = document.createElement("li");
    li.textContent = cmd;
    history.appendChild(li);
  }

  (el("undo") as HTMLButtonElement).disabled = view.history.length === 0;
  (el("export-script") as HTMLButtonElement).disabled = !model.isTerminal(view);
  (el("export-derivation") as HTMLButtonElement).disabled = !model.isTerminal(view);
  (el("command") as HTMLInputElement).disabled = model.isTerminal(view);
}

async function openSession() {
  const theorem = (el("theorem") as HTMLTextAreaElement).value;
  try {
    const { id, state } = await client.createSession(theorem);
    view = model.opened(id, state);
  } catch (e) {
    view = model.afterFailure(view, "ParseError", e instanceof Error ? e.message : String(e));
  }
  render();
}

async function submitCommand() {
  const text = input().value.trim();
  if (!view.sessionId || !text) return;
  try {
    const state = await client.submitTactic(view.sessionId, text);
    view = model.afterTactic(view, text, state);
    input().value = "";
  } catch (e) {
    if (e instanceof ApiError) {
      view = model.afterFailure(view, e.failure.code, e.failure.message);
    } else {
      view = model.afterFailure(view, "NetworkError", String(e));
    }
  }
  render();
}

async function undoLast() {
  if (!view.sessionId) return;
  try {
    const state = await client.undo(view.sessionId);
    view = model.afterUndo(view, state);
  } catch (e) {
    if (e instanceof ApiError) view = model.afterFailure(view, e.failure.code, e.failure.message);
  }
  render();
}

async function exportArtifacts(kind: "script" | "derivation") {
  if (!view.sessionId) return;
  try {
    const text =
      kind === "script"
        ? await client.getScript(view.sessionId)
        : await client.getDerivation(view.sessionId);
    download(kind === "script" ? "proof.tac" : "proof.drv", text);
  } catch (e) {
    if (e instanceof ApiError) view = model.afterFailure(view, e.failure.code, e.failure.message);
    render();
  }
}

export function start() {
  el("open").addEventListener("click", openSession);
  el("send").addEventListener("click", submitCommand);
  input().addEventListener("keydown", (e) => {
    if (e.key === "Enter") submitCommand();
  });
  el("undo").addEventListener("click", undoLast);
  el("export-script").addEventListener("click", () => exportArtifacts("script"));
  el("export-derivation").addEventListener("click", () => exportArtifacts("derivation"));
  render();
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", start);
}
