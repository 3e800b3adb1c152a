/** Embeds the self-contained animation document in a sandboxed frame. */

import { animateUrl } from "./api.js";

export interface AnimationEmbed {
  element: HTMLElement;
  reload: () => Promise<void>;
}

export function createAnimationEmbed(url: string, t1: string, t2: string): AnimationEmbed {
  const root = document.createElement("section");
  root.className = "animation";

  const controls = document.createElement("div");
  controls.className = "animation-controls";
  const replay = document.createElement("button");
  replay.type = "button";
  replay.textContent = "Restart animation";
  controls.append(replay);
  root.append(controls);

  const stage = document.createElement("div");
  stage.className = "animation-stage";
  root.append(stage);

  const frame = document.createElement("iframe");
  frame.className = "animation-frame";
  frame.setAttribute("sandbox", "allow-scripts");
  frame.title = `animated changes for ${url}`;

  async function load(): Promise<void> {
    stage.replaceChildren();
    try {
      const response = await fetch(animateUrl(url, t1, t2));
      if (!response.ok) {
        throw new Error(`animation request failed (${response.status})`);
      }
      frame.srcdoc = await response.text();
      stage.append(frame);
    } catch (err) {
      const box = document.createElement("div");
      box.className = "error-box";
      box.textContent = `could not load the animation: ${String(err)} `;
      const retry = document.createElement("button");
      retry.type = "button";
      retry.textContent = "Retry";
      retry.addEventListener("click", () => void load());
      box.append(retry);
      stage.append(box);
    }
  }

  replay.addEventListener("click", () => void load());
  void load();
  return { element: root, reload: load };
}
