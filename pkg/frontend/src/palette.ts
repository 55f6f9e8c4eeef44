/**
 * Which tactic buttons are live for a given goal.
 *
 * Goal-shape buttons follow the main connective of the conclusion; each
 * hypothesis gets its own affordance from its shape; assert, cut and trivial
 * are always available on an open goal.  Disabled buttons stay visible so
 * the correspondence between connective and tactic is something the user
 * can see.  Buttons insert command text rather than firing, so the typed
 * script stays the primary artifact.
 */

import type { GoalView, HypothesisView, Kind } from "./api.js";

export interface PaletteButton {
  id: string;
  label: string;
  insert: string;
  enabled: boolean;
}

const GOAL_TACTICS: { id: string; label: string; insert: string; kinds: Kind[] }[] = [
  { id: "intro", label: "intro", insert: "intro.", kinds: ["imp", "forall"] },
  { id: "split", label: "split", insert: "split.", kinds: ["and"] },
  { id: "left", label: "left", insert: "left.", kinds: ["or"] },
  { id: "right", label: "right", insert: "right.", kinds: ["or"] },
  { id: "exists", label: "exists …", insert: "exists ", kinds: ["exists"] },
];

const ALWAYS_TACTICS: { id: string; label: string; insert: string }[] = [
  { id: "assert", label: "assert (…)", insert: "assert (" },
  { id: "cut", label: "cut (…)", insert: "cut (" },
  { id: "trivial", label: "trivial", insert: "trivial." },
];

export function goalPalette(goal: GoalView | null): PaletteButton[] {
  const kind = goal?.conclusion.kind;
  const shaped = GOAL_TACTICS.map((t) => ({
    id: t.id,
    label: t.label,
    insert: t.insert,
    enabled: goal !== null && t.kinds.includes(kind as Kind),
  }));
  const always = ALWAYS_TACTICS.map((t) => ({ ...t, enabled: goal !== null }));
  return [...shaped, ...always];
}

/** The per-hypothesis affordance: apply for arrows and universals, destruct
 * for the three decomposable shapes, nothing for atoms. */
export function hypothesisAction(h: HypothesisView): PaletteButton | null {
  if (h.kind === "imp" || h.kind === "forall") {
    return { id: `apply-${h.label}`, label: "apply", insert: `apply ${h.label}.`, enabled: true };
  }
  if (h.kind === "and" || h.kind === "or" || h.kind === "exists") {
    return {
      id: `destruct-${h.label}`,
      label: "destruct",
      insert: `destruct ${h.label}.`,
      enabled: true,
    };
  }
  return null;
}

export function enabledGoalTactics(goal: GoalView | null): string[] {
  return goalPalette(goal)
    .filter((b) => b.enabled && GOAL_TACTICS.some((t) => t.id === b.id))
    .map((b) => b.id);
}
