import type { SchemeAttribute, SchemeDocument } from "./types.js";

export interface DraftIssue {
  attr: string;
  message: string;
}

/** Editable mirror of a scheme document.
 *
 * Edits happen on a deep copy; `toDocument` returns the payload for the
 * PUT endpoint. An untouched draft round-trips byte-identically (the
 * server owns canonical ordering).
 */
export class SchemeDraft {
  private doc: SchemeDocument;
  private dirty = false;

  constructor(source: SchemeDocument) {
    this.doc = structuredClone(source);
  }

  get attributes(): SchemeAttribute[] {
    return this.doc.attributes;
  }

  get isDirty(): boolean {
    return this.dirty;
  }

  private entry(name: string): SchemeAttribute {
    const found = this.doc.attributes.find((a) => a.name === name);
    if (found === undefined) throw new Error(`unknown attribute ${name}`);
    return found;
  }

  setType(name: string, mtype: string): void {
    this.entry(name).mtype = mtype;
    this.dirty = true;
  }

  setCodes(name: string, codes: Record<string, number>): void {
    this.entry(name).codes = { ...codes };
    this.dirty = true;
  }

  setOrder(name: string, order: string[]): void {
    const e = this.entry(name);
    e.order = [...order];
    delete e.needs_review;
    this.dirty = true;
  }

  /** Bulk type assignment: the "All Nominal" / "All Ordinal" buttons. */
  setAllTypes(mtype: "nominal" | "ordinal"): void {
    for (const a of this.doc.attributes) a.mtype = mtype;
    this.dirty = true;
  }

  setIntervalGroups(
    name: string,
    intervals: { start: number; length: number; code: number }[],
  ): void {
    for (const iv of intervals) {
      if (!(iv.length > 0)) {
        throw new Error(`attribute ${name}: interval length must be positive`);
      }
    }
    this.entry(name).groups = { kind: "intervals", intervals };
    this.dirty = true;
  }

  /** Client-side structural checks before submission. The server remains
   * the authority; this only catches what would be an obviously broken
   * payload (empty codes, non-positive interval lengths). */
  validate(): DraftIssue[] {
    const issues: DraftIssue[] = [];
    for (const a of this.doc.attributes) {
      if (a.codes !== undefined && Object.keys(a.codes).length === 0) {
        issues.push({ attr: a.name, message: "code table is empty" });
      }
      const groups = a.groups as
        | { kind?: string; intervals?: { length: number }[] }
        | undefined;
      if (groups?.kind === "intervals") {
        for (const iv of groups.intervals ?? []) {
          if (!(iv.length > 0)) {
            issues.push({ attr: a.name, message: "interval length must be positive" });
          }
        }
      }
      if (a.mtype === "ordinal" && a.needs_review === true) {
        issues.push({
          attr: a.name,
          message: "ordinal order is a lexical default; confirm it",
        });
      }
    }
    return issues;
  }

  toDocument(): SchemeDocument {
    return structuredClone(this.doc);
  }
}
