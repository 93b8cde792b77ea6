import type { LayoutBundle, RuleMetrics } from "./types.js";

export type Polarity = "include" | "exclude";

export interface BarSelection {
  attr: string;
  barIndex: number; // 0-based position in the axis bar stack
  group: string;
  polarity: Polarity;
}

export interface ViewParams {
  ref: string | null;
  purity: number;
  minSize: number;
  join: boolean;
  sort: string;
  flips: string[];
}

export const DEFAULT_PARAMS: ViewParams = {
  ref: null,
  purity: 0.8,
  minSize: 0.1,
  join: false,
  sort: "frequency_desc",
  flips: [],
};

/** Clamp a slider value into [0, 1]; NaN falls back to the previous value. */
export function clampThreshold(value: number, previous: number): number {
  if (Number.isNaN(value)) return previous;
  return Math.min(1, Math.max(0, value));
}

export interface RuleDraft {
  if: unknown;
  then: string;
}

/** View-interaction state for one dataset session.
 *
 * Bar clicks accumulate into a selection with include/exclude polarity;
 * `composeRule` turns the selection into a conjunction of value-set atoms
 * (excludes become negated atoms). The state holds the last server metrics
 * verbatim — it never derives numbers locally.
 */
export class ViewState {
  params: ViewParams = { ...DEFAULT_PARAMS };
  layout: LayoutBundle | null = null;
  selections: BarSelection[] = [];
  lastMetrics: RuleMetrics | null = null;

  constructor(public readonly datasetId: string) {}

  setLayout(bundle: LayoutBundle): void {
    this.layout = bundle;
    // Drop selections whose bar no longer exists under the new layout.
    this.selections = this.selections.filter((s) => this.findBar(s) !== null);
  }

  private findBar(sel: BarSelection) {
    const axis = this.layout?.layouts.find((a) => a.attribute === sel.attr);
    const bar = axis?.bars[sel.barIndex];
    return bar !== undefined && bar.group === sel.group ? bar : null;
  }

  /** Toggle a bar selection. A second click with the same polarity clears
   * it; a click with the other polarity switches it. */
  toggleBar(attr: string, barIndex: number, polarity: Polarity): void {
    if (this.layout === null) throw new Error("no layout fetched yet");
    const axis = this.layout.layouts.find((a) => a.attribute === attr);
    const bar = axis?.bars[barIndex];
    if (bar === undefined) {
      throw new Error(`no bar ${barIndex} on axis ${attr}`);
    }
    const existing = this.selections.findIndex(
      (s) => s.attr === attr && s.barIndex === barIndex,
    );
    if (existing >= 0) {
      const same = this.selections[existing].polarity === polarity;
      this.selections.splice(existing, 1);
      if (same) return;
    }
    this.selections.push({ attr, barIndex, group: bar.group, polarity });
  }

  clearSelection(): void {
    this.selections = [];
  }

  /** True when the draft can be submitted: at least one selected bar and
   * every selection still references an existing layout bar. */
  canCompose(): boolean {
    return (
      this.selections.length > 0 && this.selections.every((s) => this.findBar(s) !== null)
    );
  }

  /** Build the rule JSON for the current selection: include bars become
   * value-set atoms, exclude bars negated ones, all conjoined. */
  composeRule(targetClass: string): RuleDraft {
    if (!this.canCompose()) {
      throw new Error("selection is empty or references stale bars");
    }
    const atoms = this.selections.map((s) => {
      const atom = { atom: "in_set", attr: s.attr, values: [s.group] };
      return s.polarity === "include" ? atom : { op: "not", args: [atom] };
    });
    const antecedent = atoms.length === 1 ? atoms[0] : { op: "and", args: atoms };
    return { if: antecedent, then: targetClass };
  }

  recordMetrics(metrics: RuleMetrics): void {
    this.lastMetrics = metrics;
  }
}
