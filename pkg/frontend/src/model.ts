/**
 * Client view state: a verbatim mirror of the last server response plus the
 * command history and any error banner.  All transitions are pure.
 */

import type { SessionState } from "./api.js";

export interface ViewState {
  sessionId: string | null;
  state: SessionState | null;
  history: string[];
  error: string | null;
}

export const empty: ViewState = { sessionId: null, state: null, history: [], error: null };

export function opened(id: string, state: SessionState): ViewState {
  return { sessionId: id, state, history: [], error: null };
}

export function afterTactic(view: ViewState, command: string, state: SessionState): ViewState {
  return { ...view, state, history: [...view.history, command], error: null };
}

/** A rejected tactic shows its error inline and leaves the goals alone. */
export function afterFailure(view: ViewState, code: string, message: string): ViewState {
  return { ...view, error: `${code}: ${message}` };
}

export function afterUndo(view: ViewState, state: SessionState): ViewState {
  return { ...view, state, history: view.history.slice(0, -1), error: null };
}

export function currentGoal(view: ViewState) {
  return view.state?.goal_details[0] ?? null;
}

export function isTerminal(view: ViewState): boolean {
  return view.state?.terminal ?? false;
}
