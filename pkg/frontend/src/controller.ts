import { HetvizClient } from "./api.js";
import { Debounced, debounce } from "./debounce.js";
import { Scene, SceneSpec, DEFAULT_SPEC, buildScene } from "./scene.js";
import { ViewState, Polarity, clampThreshold } from "./viewState.js";
import type { RuleMetrics } from "./types.js";

export interface ControllerHooks {
  onScene?: (scene: Scene) => void;
  onReport?: (lines: string[]) => void;
  onMetrics?: (metrics: RuleMetrics) => void;
  onError?: (message: string) => void;
}

const SLIDER_DEBOUNCE_MS = 150;

/** Glue between the view state, the HTTP client, and the render layer.
 *
 * Slider movements funnel through one debounced refresh, so a drag causes
 * a single refetch; the report panel refreshes together with the layout.
 * All failures surface through `onError` and leave the previous state
 * intact.
 */
export class ViewController {
  readonly state: ViewState;
  private readonly refreshDebounced: Debounced<[]>;

  constructor(
    private readonly client: HetvizClient,
    datasetId: string,
    private readonly hooks: ControllerHooks = {},
    private readonly spec: SceneSpec = DEFAULT_SPEC,
  ) {
    this.state = new ViewState(datasetId);
    this.refreshDebounced = debounce(() => {
      void this.refresh();
    }, SLIDER_DEBOUNCE_MS);
  }

  /** Immediate fetch + render; used on load and after scheme saves. */
  async refresh(): Promise<void> {
    const p = this.state.params;
    try {
      const bundle = await this.client.getLayout(this.state.datasetId, {
        ref: p.ref ?? undefined,
        purity: p.purity,
        minsize: p.minSize,
        join: p.join,
        sort: p.sort,
        flips: p.flips,
      });
      if (bundle === null) return; // superseded by a newer request
      this.state.setLayout(bundle);
      this.hooks.onScene?.(
        buildScene(bundle, { ...this.spec, purityThreshold: p.purity }),
      );
      this.hooks.onReport?.(bundle.report);
    } catch (err) {
      this.hooks.onError?.(err instanceof Error ? err.message : String(err));
    }
  }

  /** Slider input: clamp, store, and schedule one debounced refresh. */
  setPurity(value: number): void {
    this.state.params.purity = clampThreshold(value, this.state.params.purity);
    this.refreshDebounced();
  }

  setMinSize(value: number): void {
    this.state.params.minSize = clampThreshold(value, this.state.params.minSize);
    this.refreshDebounced();
  }

  setReference(attr: string): void {
    this.state.params.ref = attr;
    this.refreshDebounced();
  }

  toggleFlip(attr: string): void {
    const flips = this.state.params.flips;
    const i = flips.indexOf(attr);
    if (i >= 0) flips.splice(i, 1);
    else flips.push(attr);
    this.refreshDebounced();
  }

  barClicked(attr: string, barIndex: number, polarity: Polarity): void {
    this.state.toggleBar(attr, barIndex, polarity);
  }

  /** Submit the selection as a rule; metrics come back from the server. */
  async submitRule(targetClass: string): Promise<RuleMetrics | null> {
    if (!this.state.canCompose()) return null;
    const draft = this.state.composeRule(targetClass);
    try {
      const metrics = await this.client.evalRule(this.state.datasetId, draft);
      this.state.recordMetrics(metrics);
      this.hooks.onMetrics?.(metrics);
      return metrics;
    } catch (err) {
      this.hooks.onError?.(err instanceof Error ? err.message : String(err));
      return null;
    }
  }
}
