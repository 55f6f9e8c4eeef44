/**
 * Thin typed client for the proof session API.
 *
 * Every piece of logic lives on the server; this module only moves JSON and
 * plain text back and forth, so the browser can never disagree with the
 * kernel about what a goal looks like.
 */

export type Kind = "atom" | "imp" | "and" | "or" | "forall" | "exists" | "unknown";

export interface HypothesisView {
  label: string;
  text: string;
  kind: Kind;
}

export interface GoalView {
  render: string;
  conclusion: { text: string; kind: Kind };
  hypotheses: HypothesisView[];
}

export interface SessionState {
  goals: string[];
  goal_details: GoalView[];
  script: string;
  terminal: boolean;
}

export interface TacticFailure {
  step: number | null;
  code: string;
  message: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly failure: TacticFailure,
  ) {
    super(`${failure.code}: ${failure.message}`);
  }
}

async function parseFailure(res: Response): Promise<never> {
  let failure: TacticFailure = { step: null, code: `HTTP${res.status}`, message: res.statusText };
  try {
    const body = await res.json();
    if (body && typeof body.code === "string") {
      failure = body as TacticFailure;
    }
  } catch {
    // non-JSON error body; keep the HTTP fallback
  }
  throw new ApiError(res.status, failure);
}

export class MinilogClient {
  constructor(readonly base: string) {}

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await fetch(this.base + path, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    if (!res.ok) await parseFailure(res);
    return (await res.json()) as T;
  }

  private async text(path: string): Promise<string> {
    const res = await fetch(this.base + path);
    if (!res.ok) await parseFailure(res);
    return res.text();
  }

  createSession(theorem: string): Promise<{ id: string; state: SessionState }> {
    return this.json("/sessions", { method: "POST", body: JSON.stringify({ theorem }) });
  }

  getSession(id: string): Promise<SessionState> {
    return this.json(`/sessions/${id}`);
  }

  submitTactic(id: string, text: string): Promise<SessionState> {
    return this.json(`/sessions/${id}/tactic`, { method: "POST", body: JSON.stringify({ text }) });
  }

  undo(id: string): Promise<SessionState> {
    return this.json(`/sessions/${id}/undo`, { method: "POST" });
  }

  getScript(id: string): Promise<string> {
    return this.text(`/sessions/${id}/script`);
  }

  getDerivation(id: string): Promise<string> {
    return this.text(`/sessions/${id}/derivation`);
  }
}
