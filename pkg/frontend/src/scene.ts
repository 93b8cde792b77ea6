import type { AxisJson, EdgeBundleJson, LayoutBundle } from "./types.js";

/** Scene graph built purely from a layout payload.
 *
 * Rendering is split in two: this module turns server JSON into a
 * deterministic list of positioned primitives; the DOM layer (app.ts) only
 * materializes them. Tests assert on the scene graph, so no browser is
 * needed.
 */

export const CLASS_PALETTE = [
  "#d633ff", // magenta
  "#3366ff", // blue
  "#e6c800", // yellow
  "#2e8b57",
  "#ff7f0e",
  "#17becf",
  "#8c564b",
];
export const JOINED_COLOR = "#9e9e9e";
export const FRAME_COLOR = "#1db31d";
export const JOINED_CLASS = "(joined)";

export interface SceneRect {
  kind: "segment" | "frame";
  attr: string;
  barIndex: number;
  cls: string | null;
  x: number;
  y: number;
  width: number;
  height: number;
  color: string;
}

export interface SceneEdge {
  kind: "edge";
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  width: number;
  color: string;
}

export interface SceneSpec {
  width: number;
  height: number;
  margin: number;
  barWidth: number;
  purityThreshold: number;
}

export const DEFAULT_SPEC: SceneSpec = {
  width: 900,
  height: 600,
  margin: 40,
  barWidth: 16,
  purityThreshold: 0.8,
};

export interface Scene {
  rects: SceneRect[];
  edges: SceneEdge[];
  axisX: Record<string, number>;
}

export function classColor(
  cls: string | null,
  classOrder: string[],
  colorMap: Record<string, string> = {},
): string {
  if (cls === null) return JOINED_COLOR;
  if (colorMap[cls] !== undefined) return colorMap[cls];
  if (cls === JOINED_CLASS) return JOINED_COLOR;
  const i = classOrder.indexOf(cls);
  if (i < 0) return JOINED_COLOR;
  return CLASS_PALETTE[i % CLASS_PALETTE.length];
}

function axisPositions(order: string[], spec: SceneSpec): Record<string, number> {
  const usable = spec.width - 2 * spec.margin;
  const step = order.length > 1 ? usable / (order.length - 1) : 0;
  const out: Record<string, number> = {};
  order.forEach((attr, i) => {
    out[attr] = spec.margin + (order.length > 1 ? i * step : usable / 2);
  });
  return out;
}

interface BarSpan {
  y0: number;
  y1: number;
}

function barSpans(axis: AxisJson, spec: SceneSpec): BarSpan[] {
  // Bars stack bottom-to-top in layout order; y grows downward on screen.
  const top = spec.margin;
  const bottom = spec.height - spec.margin;
  const usable = bottom - top;
  const spans: BarSpan[] = [];
  let acc = 0;
  for (const bar of axis.bars) {
    const y1 = bottom - acc * usable;
    const y0 = bottom - (acc + bar.height) * usable;
    spans.push({ y0, y1 });
    acc += bar.height;
  }
  return spans;
}

function barRects(
  axis: AxisJson,
  x: number,
  classOrder: string[],
  spec: SceneSpec,
): SceneRect[] {
  const rects: SceneRect[] = [];
  const spans = barSpans(axis, spec);
  axis.bars.forEach((bar, barIndex) => {
    const { y0, y1 } = spans[barIndex];
    const barHeight = y1 - y0;
    // Dominant class first (bottom), then the rest in class order.
    const classes = Object.keys(bar.per_class).sort((a, b) => {
      if (a === bar.dominant) return -1;
      if (b === bar.dominant) return 1;
      return classOrder.indexOf(a) - classOrder.indexOf(b);
    });
    let acc = y1;
    const total = bar.total || 1;
    for (const cls of classes) {
      const h = (bar.per_class[cls] / total) * barHeight;
      rects.push({
        kind: "segment",
        attr: axis.attribute,
        barIndex,
        cls,
        x: x - spec.barWidth / 2,
        y: acc - h,
        width: spec.barWidth,
        height: h,
        color: classColor(cls, classOrder),
      });
      acc -= h;
    }
    if (bar.purity >= spec.purityThreshold) {
      rects.push({
        kind: "frame",
        attr: axis.attribute,
        barIndex,
        cls: null,
        x: x - spec.barWidth / 2 - 2,
        y: y0 - 2,
        width: spec.barWidth + 4,
        height: barHeight + 4,
        color: FRAME_COLOR,
      });
    }
  });
  return rects;
}

function edgeLines(
  bundle: EdgeBundleJson,
  leftAxis: AxisJson,
  rightAxis: AxisJson,
  xLeft: number,
  xRight: number,
  classOrder: string[],
  spec: SceneSpec,
): SceneEdge[] {
  const leftSpans = barSpans(leftAxis, spec);
  const rightSpans = barSpans(rightAxis, spec);
  const leftIndex = new Map(leftAxis.bars.map((b, i) => [b.group, i]));
  const rightIndex = new Map(rightAxis.bars.map((b, i) => [b.group, i]));
  const maxCount = Math.max(1, ...bundle.counts.map((e) => e.count));
  const lines: SceneEdge[] = [];
  for (const e of bundle.counts) {
    const li = leftIndex.get(e.left_group);
    const ri = rightIndex.get(e.right_group);
    if (li === undefined || ri === undefined) continue; // filtered-out bar
    const ls = leftSpans[li];
    const rs = rightSpans[ri];
    lines.push({
      kind: "edge",
      x1: xLeft + spec.barWidth / 2,
      y1: (ls.y0 + ls.y1) / 2,
      x2: xRight - spec.barWidth / 2,
      y2: (rs.y0 + rs.y1) / 2,
      width: 1 + 5 * (e.count / maxCount),
      color: classColor(e.class, classOrder),
    });
  }
  return lines;
}

/** Distinct classes across the bundle, in first-appearance order. */
export function classOrderOf(bundle: LayoutBundle): string[] {
  const seen: string[] = [];
  for (const axis of bundle.layouts) {
    for (const bar of axis.bars) {
      for (const cls of Object.keys(bar.per_class)) {
        if (cls !== JOINED_CLASS && !seen.includes(cls)) seen.push(cls);
      }
    }
  }
  return seen;
}

export function buildScene(bundle: LayoutBundle, spec: SceneSpec = DEFAULT_SPEC): Scene {
  const classOrder = classOrderOf(bundle);
  const axisX = axisPositions(bundle.axis_order, spec);
  const byAttr = new Map(bundle.layouts.map((a) => [a.attribute, a]));
  const rects: SceneRect[] = [];
  for (const attr of bundle.axis_order) {
    const axis = byAttr.get(attr);
    if (axis !== undefined) rects.push(...barRects(axis, axisX[attr], classOrder, spec));
  }
  const edges: SceneEdge[] = [];
  for (const bundleEdges of bundle.edges) {
    const left = byAttr.get(bundleEdges.left);
    const right = byAttr.get(bundleEdges.right);
    if (left === undefined || right === undefined) continue;
    edges.push(
      ...edgeLines(
        bundleEdges,
        left,
        right,
        axisX[bundleEdges.left],
        axisX[bundleEdges.right],
        classOrder,
        spec,
      ),
    );
  }
  return { rects, edges, axisX };
}

/** Count of framed (high-purity) bars in a scene; monotone non-increasing
 * in the purity threshold. */
export function framedBarCount(scene: Scene): number {
  return scene.rects.filter((r) => r.kind === "frame").length;
}
