import type { LayoutBundle } from "./types.js";

/** Two-axis layout payload shaped exactly like the layout endpoint's JSON. */
export function sampleBundle(purity = 0.8): LayoutBundle {
  return {
    axis_order: ["X11", "X12"],
    params: {
      ref: "class",
      purity,
      min_size: 0,
      small_block: 0.2,
      join: false,
      sort: "frequency_desc",
      flips: [],
    },
    layouts: [
      {
        attribute: "X11",
        flipped: false,
        residual: [],
        bars: [
          {
            group: "m",
            total: 60,
            per_class: { yellow: 55, blue: 5 },
            dominant: "yellow",
            purity: 55 / 60,
            height: 0.6,
            joined: false,
          },
          {
            group: "n",
            total: 40,
            per_class: { yellow: 10, blue: 30 },
            dominant: "blue",
            purity: 0.75,
            height: 0.4,
            joined: false,
          },
        ],
      },
      {
        attribute: "X12",
        flipped: false,
        residual: [],
        bars: [
          {
            group: "y",
            total: 70,
            per_class: { yellow: 35, blue: 35 },
            dominant: "yellow",
            purity: 0.5,
            height: 0.7,
            joined: false,
          },
          {
            group: "z",
            total: 30,
            per_class: { yellow: 30 },
            dominant: "yellow",
            purity: 1.0,
            height: 0.3,
            joined: false,
          },
        ],
      },
    ],
    edges: [
      {
        left: "X11",
        right: "X12",
        counts: [
          { left_group: "m", right_group: "y", class: "yellow", count: 40 },
          { left_group: "m", right_group: "z", class: "yellow", count: 20 },
          { left_group: "n", right_group: "y", class: "blue", count: 30 },
          { left_group: "n", right_group: "z", class: "yellow", count: 10 },
        ],
      },
    ],
    report: ["X12, block, 2 has a purity of 100"],
  };
}
