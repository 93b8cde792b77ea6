export { HetvizClient, ApiError } from "./api.js";
export { debounce } from "./debounce.js";
export { ViewController } from "./controller.js";
export { ViewState, clampThreshold, DEFAULT_PARAMS } from "./viewState.js";
export { SchemeDraft } from "./schemeDraft.js";
export {
  buildScene,
  classColor,
  classOrderOf,
  framedBarCount,
  CLASS_PALETTE,
  FRAME_COLOR,
  JOINED_COLOR,
  DEFAULT_SPEC,
} from "./scene.js";
export type * from "./types.js";
