/** Sliding-diff navigation state and view.
 *
 * The state tracks the current consecutive-version pair. Fast-forward and
 * rewind skip pairs whose transition is a pure reordering (identical map);
 * jump-to-first/jump-to-last land on the chain endpoints. Out-of-range
 * actions are no-ops.
 */

import { getSlide } from "./api.js";
import type { SlideResponse, VersionsResponse } from "./types.js";

export interface SliderState {
  index: number;
  count: number;
  identical: boolean[];
  firstVersion: number;
  lastVersion: number;
}

export type SliderAction =
  | { kind: "step"; delta: 1 | -1 }
  | { kind: "fastForward" }
  | { kind: "rewind" }
  | { kind: "jumpFirst" }
  | { kind: "jumpLast" }
  | { kind: "drag"; to: number };

export function initialSliderState(summary: VersionsResponse): SliderState {
  return {
    index: 0,
    count: summary.identicalSkipMap.length,
    identical: [...summary.identicalSkipMap],
    firstVersion: summary.first,
    lastVersion: summary.last,
  };
}

export function navigate(state: SliderState, action: SliderAction): SliderState {
  if (state.count === 0) return state;
  const clamp = (i: number) => Math.max(0, Math.min(state.count - 1, i));
  switch (action.kind) {
    case "step":
      return { ...state, index: clamp(state.index + action.delta) };
    case "drag":
      return { ...state, index: clamp(action.to) };
    case "jumpFirst":
      return { ...state, index: 0 };
    case "jumpLast":
      return { ...state, index: state.count - 1 };
    case "fastForward": {
      for (let i = state.index + 1; i < state.count; i++) {
        if (!state.identical[i]) return { ...state, index: i };
      }
      return state;
    }
    case "rewind": {
      for (let i = state.index - 1; i >= 0; i--) {
        if (!state.identical[i]) return { ...state, index: i };
      }
      return state;
    }
  }
}

/** Fetch-once cache per pair index. */
export class SlideCache {
  private cache = new Map<number, Promise<SlideResponse>>();

  constructor(private readonly url: string) {}

  get(index: number): Promise<SlideResponse> {
    let entry = this.cache.get(index);
    if (!entry) {
      entry = getSlide(this.url, index);
      this.cache.set(index, entry);
    }
    return entry;
  }
}

export function renderSlideDiff(slide: SlideResponse): HTMLElement {
  const box = document.createElement("div");
  box.className = "slide-diff";
  const header = document.createElement("p");
  header.className = "slide-pair";
  header.textContent = slide.identical
    ? `versions ${slide.pair[0]} to ${slide.pair[1]} (no term changes)`
    : `versions ${slide.pair[0]} to ${slide.pair[1]}`;
  box.append(header);
  const body = document.createElement("p");
  for (const region of slide.regions) {
    if (region.kind === "keep") {
      appendTokens(body, region.aTokens, "tok-kept");
    } else {
      appendTokens(body, region.aTokens, "tok-deleted");
      appendTokens(body, region.bTokens, "tok-added");
    }
  }
  box.append(body);
  return box;
}

function appendTokens(parent: HTMLElement, tokens: string[], cls: string): void {
  for (const token of tokens) {
    const span = document.createElement("span");
    span.className = cls;
    span.textContent = token;
    parent.append(span);
    parent.append(document.createTextNode(" "));
  }
}

export interface SliderView {
  element: HTMLElement;
  state: () => SliderState;
  dispatch: (action: SliderAction) => Promise<void>;
}

export function createSliderView(summary: VersionsResponse): SliderView {
  let state = initialSliderState(summary);
  const cache = new SlideCache(summary.canonicalUrl);

  const root = document.createElement("section");
  root.className = "slider";

  const controls = document.createElement("div");
  controls.className = "slider-controls";
  const buttons: [string, SliderAction, string][] = [
    ["|<", { kind: "jumpFirst" }, "jump to first version"],
    ["<<", { kind: "rewind" }, "rewind past identical versions"],
    ["<", { kind: "step", delta: -1 }, "previous pair"],
    [">", { kind: "step", delta: 1 }, "next pair"],
    [">>", { kind: "fastForward" }, "fast-forward past identical versions"],
    [">|", { kind: "jumpLast" }, "jump to last version"],
  ];
  for (const [label, action, title] of buttons) {
    const b = document.createElement("button");
    b.type = "button";
    b.textContent = label;
    b.title = title;
    b.dataset.action = action.kind + ("delta" in action ? String(action.delta) : "");
    b.addEventListener("click", () => void dispatch(action));
    controls.append(b);
  }
  const range = document.createElement("input");
  range.type = "range";
  range.min = "0";
  range.max = String(Math.max(0, state.count - 1));
  range.value = "0";
  range.addEventListener("input", () =>
    void dispatch({ kind: "drag", to: Number(range.value) }),
  );
  controls.append(range);
  root.append(controls);

  const stage = document.createElement("div");
  stage.className = "slider-stage";
  root.append(stage);

  async function show(): Promise<void> {
    range.value = String(state.index);
    if (state.count === 0) {
      stage.textContent = "single version: nothing to compare";
      return;
    }
    const slide = await cache.get(state.index);
    stage.replaceChildren(renderSlideDiff(slide));
  }

  async function dispatch(action: SliderAction): Promise<void> {
    state = navigate(state, action);
    await show();
  }

  void show();
  return { element: root, state: () => state, dispatch };
}
