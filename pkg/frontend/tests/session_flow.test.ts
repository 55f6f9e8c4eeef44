/**
 * Full session flow against the real backend: open the chained-implication
 * theorem, run its nine commands, watch the palette track each goal shape,
 * then export both artifacts and re-check the derivation with the CLI.
 */

import { execFile, spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { promisify } from "node:util";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiError, MinilogClient } from "../src/api.js";
import * as model from "../src/model.js";
import { enabledGoalTactics } from "../src/palette.js";

const run = promisify(execFile);
const PORT = 8655;
const BASE = `http://127.0.0.1:${PORT}`;

const THEOREM = `hyp H1 : p -> q \\/ r
hyp H2 : q -> r
hyp H3 : r -> s
theorem chain : p -> s
`;

const COMMANDS = [
  "intro.",
  "apply H3.",
  "assert (q \\/ r) as H5.",
  "apply H1.",
  "trivial.",
  "destruct H5.",
  "apply H2.",
  "trivial.",
  "trivial.",
];

let server: ChildProcess;

async function waitForServer(): Promise<void> {
  for (let i = 0; i < 100; i++) {
    try {
      const res = await fetch(`${BASE}/sessions/probe`);
      if (res.status === 404) return;
    } catch {
      await new Promise((r) => setTimeout(r, 100));
    }
  }
  throw new Error("backend did not come up");
}

beforeAll(async () => {
  server = spawn("python3", ["-m", "minilog.cli", "serve", "--port", String(PORT)], {
    stdio: "ignore",
  });
  await waitForServer();
}, 30000);

afterAll(() => {
  server?.kill();
});

describe("interactive session against the live backend", () => {
  const client = new MinilogClient(BASE);

  it("runs the nine commands to the terminal state and exports artifacts", async () => {
    const { id, state } = await client.createSession(THEOREM);
    let view = model.opened(id, state);
    expect(state.goals[0]).toContain("|- p -> s");
    expect(enabledGoalTactics(model.currentGoal(view))).toEqual(["intro"]);

    for (const cmd of COMMANDS) {
      const next = await client.submitTactic(id, cmd);
      view = model.afterTactic(view, cmd, next);
      // the palette always reflects the server-reported shape of the head goal
      const goal = model.currentGoal(view);
      const enabled = enabledGoalTactics(goal);
      if (goal === null) {
        expect(enabled).toEqual([]);
      } else {
        const kind = goal.conclusion.kind;
        const expectByKind: Record<string, string[]> = {
          imp: ["intro"],
          forall: ["intro"],
          and: ["split"],
          or: ["left", "right"],
          exists: ["exists"],
          atom: [],
        };
        expect(enabled).toEqual(expectByKind[kind]);
      }
    }

    expect(model.isTerminal(view)).toBe(true);
    expect(view.history).toEqual(COMMANDS);

    const script = await client.getScript(id);
    expect(script.trim().split("\n")).toEqual(COMMANDS);

    const derivation = await client.getDerivation(id);
    const dir = mkdtempSync(join(tmpdir(), "minilog-ui-"));
    const file = join(dir, "exported.drv");
    writeFileSync(file, derivation);
    const { stdout } = await run("python3", ["-m", "minilog.cli", "check", file]);
    expect(stdout).toContain("accepted");
  }, 30000);

  it("shows a 422 inline without changing the goals", async () => {
    const { id, state } = await client.createSession(THEOREM);
    let view = model.opened(id, state);
    try {
      await client.submitTactic(id, "split.");
      throw new Error("expected a tactic failure");
    } catch (e) {
      expect(e).toBeInstanceOf(ApiError);
      const err = e as ApiError;
      expect(err.status).toBe(422);
      expect(err.failure.code).toBe("TacticMismatch");
      view = model.afterFailure(view, err.failure.code, err.failure.message);
    }
    expect(view.error).toContain("TacticMismatch");
    const fresh = await client.getSession(id);
    expect(fresh.goals).toEqual(state.goals);
  });

  it("undo round-trips through the server", async () => {
    const { id, state } = await client.createSession(THEOREM);
    const after = await client.submitTactic(id, "intro.");
    expect(after.goals).not.toEqual(state.goals);
    const back = await client.undo(id);
    expect(back.goals).toEqual(state.goals);
  });
});
