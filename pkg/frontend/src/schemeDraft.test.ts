import { describe, expect, it } from "vitest";

import { SchemeDraft } from "./schemeDraft.js";
import type { SchemeDocument } from "./types.js";

function doc(): SchemeDocument {
  return {
    version: 1,
    attributes: [
      { name: "color", mtype: "nominal", codes: { r: 1, g: 2 } },
      { name: "grade", mtype: "ordinal", order: ["low", "high"], needs_review: true },
      { name: "age", mtype: "ratio" },
    ],
  };
}

describe("SchemeDraft", () => {
  it("an untouched draft round-trips unchanged", () => {
    const source = doc();
    const draft = new SchemeDraft(source);
    expect(draft.isDirty).toBe(false);
    expect(draft.toDocument()).toEqual(source);
  });

  it("editing the draft does not mutate the source document", () => {
    const source = doc();
    const draft = new SchemeDraft(source);
    draft.setType("age", "interval");
    expect(source.attributes[2].mtype).toBe("ratio");
    expect(draft.toDocument().attributes[2].mtype).toBe("interval");
    expect(draft.isDirty).toBe(true);
  });

  it("bulk type assignment touches every attribute", () => {
    const draft = new SchemeDraft(doc());
    draft.setAllTypes("ordinal");
    expect(draft.attributes.every((a) => a.mtype === "ordinal")).toBe(true);
    draft.setAllTypes("nominal");
    expect(draft.attributes.every((a) => a.mtype === "nominal")).toBe(true);
  });

  it("confirming an order clears the review flag", () => {
    const draft = new SchemeDraft(doc());
    draft.setOrder("grade", ["high", "low"]);
    const grade = draft.toDocument().attributes[1];
    expect(grade.order).toEqual(["high", "low"]);
    expect(grade.needs_review).toBeUndefined();
  });

  it("rejects non-positive interval lengths", () => {
    const draft = new SchemeDraft(doc());
    expect(() =>
      draft.setIntervalGroups("age", [{ start: 0, length: 0, code: 1 }]),
    ).toThrow(/positive/);
  });

  it("unknown attribute names throw", () => {
    const draft = new SchemeDraft(doc());
    expect(() => draft.setType("ghost", "nominal")).toThrow(/unknown attribute/);
  });

  it("validate flags empty code tables and unconfirmed ordinal orders", () => {
    const draft = new SchemeDraft(doc());
    draft.setCodes("color", {});
    const issues = draft.validate();
    expect(issues).toContainEqual({ attr: "color", message: "code table is empty" });
    expect(issues.some((i) => i.attr === "grade" && /confirm/.test(i.message))).toBe(
      true,
    );
  });

  it("validate passes once issues are fixed", () => {
    const draft = new SchemeDraft(doc());
    draft.setOrder("grade", ["low", "high"]);
    expect(draft.validate()).toEqual([]);
  });
});
