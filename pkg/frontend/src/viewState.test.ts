import { beforeEach, describe, expect, it } from "vitest";

import { ViewState, clampThreshold } from "./viewState.js";
import { sampleBundle } from "./testData.js";

describe("clampThreshold", () => {
  it("clamps into [0, 1]", () => {
    expect(clampThreshold(-0.5, 0.8)).toBe(0);
    expect(clampThreshold(1.5, 0.8)).toBe(1);
    expect(clampThreshold(0.3, 0.8)).toBe(0.3);
  });

  it("NaN keeps the previous value", () => {
    expect(clampThreshold(Number.NaN, 0.8)).toBe(0.8);
  });
});

describe("ViewState selection and rule composition", () => {
  let state: ViewState;

  beforeEach(() => {
    state = new ViewState("ds1");
    state.setLayout(sampleBundle());
  });

  it("include + exclude pair composes a two-atom conjunction", () => {
    state.toggleBar("X11", 0, "include"); // magenta block on X11
    state.toggleBar("X12", 0, "exclude"); // yellow block on X12
    const draft = state.composeRule("yellow");
    expect(draft).toEqual({
      if: {
        op: "and",
        args: [
          { atom: "in_set", attr: "X11", values: ["m"] },
          { op: "not", args: [{ atom: "in_set", attr: "X12", values: ["y"] }] },
        ],
      },
      then: "yellow",
    });
  });

  it("single selection composes a bare atom", () => {
    state.toggleBar("X12", 1, "include");
    expect(state.composeRule("yellow")).toEqual({
      if: { atom: "in_set", attr: "X12", values: ["z"] },
      then: "yellow",
    });
  });

  it("second click with the same polarity clears the selection", () => {
    state.toggleBar("X11", 0, "include");
    state.toggleBar("X11", 0, "include");
    expect(state.canCompose()).toBe(false);
  });

  it("opposite polarity switches instead of duplicating", () => {
    state.toggleBar("X11", 0, "include");
    state.toggleBar("X11", 0, "exclude");
    expect(state.selections).toHaveLength(1);
    expect(state.selections[0].polarity).toBe("exclude");
  });

  it("empty selection cannot compose", () => {
    expect(state.canCompose()).toBe(false);
    expect(() => state.composeRule("yellow")).toThrow();
  });

  it("clicking an unknown bar throws", () => {
    expect(() => state.toggleBar("X11", 9, "include")).toThrow(/no bar 9/);
  });

  it("stale selections are dropped when the layout changes", () => {
    state.toggleBar("X11", 1, "include");
    const smaller = sampleBundle();
    smaller.layouts[0].bars = smaller.layouts[0].bars.slice(0, 1);
    state.setLayout(smaller);
    expect(state.canCompose()).toBe(false);
  });

  it("metrics are stored verbatim", () => {
    const metrics = {
      coverage: 60,
      correct: 55,
      precision: 55 / 60,
      error_rate: 5 / 60,
      decided: 60,
    };
    state.recordMetrics(metrics);
    expect(state.lastMetrics).toEqual(metrics);
  });
});
