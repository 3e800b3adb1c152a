/** Page wiring: query form, results, slider and animation panes. */

import { ApiError, getVersions, searchChanges } from "./api.js";
import { createAnimationEmbed } from "./animation.js";
import { renderError, renderHitList } from "./serp.js";
import { createSliderView } from "./slider.js";
import type { ChangeType, SearchParams } from "./types.js";

const CHANGE_TYPES: [ChangeType, string][] = [
  ["deleted_term", "deleted term"],
  ["deleted_phrase", "deleted phrase"],
  ["added_term", "added term"],
  ["added_phrase", "added phrase"],
];

export function buildForm(onSubmit: (params: SearchParams) => void): HTMLFormElement {
  const form = document.createElement("form");
  form.className = "query-form";

  const typeSelect = document.createElement("select");
  typeSelect.name = "type";
  for (const [value, label] of CHANGE_TYPES) {
    const option = document.createElement("option");
    option.value = value;
    option.textContent = label;
    typeSelect.append(option);
  }

  const text = document.createElement("input");
  text.type = "search";
  text.name = "q";
  text.placeholder = "term or phrase";
  text.setAttribute("aria-label", "change text to search for");

  const partial = document.createElement("input");
  partial.type = "checkbox";
  partial.name = "partial";
  partial.checked = true;
  const partialLabel = document.createElement("label");
  partialLabel.append(partial, document.createTextNode(" include partial changes"));

  const from = document.createElement("input");
  from.type = "date";
  from.name = "from";
  const to = document.createElement("input");
  to.type = "date";
  to.name = "to";
  const domain = document.createElement("input");
  domain.type = "text";
  domain.name = "domain";
  domain.placeholder = "domain filter (e.g. epa.gov)";

  const submit = document.createElement("button");
  submit.type = "submit";
  submit.textContent = "Search changes";
  submit.disabled = true;

  text.addEventListener("input", () => {
    submit.disabled = text.value.trim() === "";
  });

  form.append(typeSelect, text, partialLabel, from, to, domain, submit);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    if (text.value.trim() === "") return;
    onSubmit({
      type: typeSelect.value as ChangeType,
      q: text.value.trim(),
      partial: partial.checked,
      from: from.value ? from.value.replaceAll("-", "") + "000000" : undefined,
      to: to.value ? to.value.replaceAll("-", "") + "235959" : undefined,
      domain: domain.value.trim() || undefined,
    });
  });
  return form;
}

function parseQuery(href: string): Record<string, string> {
  const out: Record<string, string> = {};
  const q = href.split("?", 2)[1] ?? "";
  for (const [k, v] of new URLSearchParams(q)) out[k] = v;
  return out;
}

export function mountApp(root: HTMLElement): void {
  const results = document.createElement("div");
  results.id = "results-pane";
  const detail = document.createElement("div");
  detail.id = "detail-pane";

  const form = buildForm((params) => void runSearch(params));
  root.append(form, results, detail);

  async function runSearch(params: SearchParams): Promise<void> {
    results.replaceChildren(document.createTextNode("searching…"));
    detail.replaceChildren();
    try {
      const response = await searchChanges(params);
      const list = renderHitList(response.hits, response.total);
      wireActions(list);
      results.replaceChildren(list);
    } catch (err) {
      if (err instanceof ApiError) {
        results.replaceChildren(renderError(err.code, err.message));
      } else {
        results.replaceChildren(renderError("NetworkError", String(err)));
      }
    }
  }

  function wireActions(list: HTMLElement): void {
    for (const link of list.querySelectorAll<HTMLAnchorElement>("a[data-action]")) {
      link.addEventListener("click", (event) => {
        event.preventDefault();
        const params = parseQuery(link.href);
        if (link.dataset.action === "slide") {
          void openSlider(params.url ?? "");
        } else if (link.dataset.action === "animate") {
          openAnimation(params.url ?? "", params.t1 ?? "", params.t2 ?? "");
        }
      });
    }
  }

  async function openSlider(url: string): Promise<void> {
    detail.replaceChildren(document.createTextNode("loading versions…"));
    try {
      const summary = await getVersions(url);
      const view = createSliderView(summary);
      detail.replaceChildren(view.element);
    } catch (err) {
      const e = err instanceof ApiError ? err : new ApiError("NetworkError", String(err), 0);
      detail.replaceChildren(renderError(e.code, e.message));
    }
  }

  function openAnimation(url: string, t1: string, t2: string): void {
    const embed = createAnimationEmbed(url, t1, t2);
    detail.replaceChildren(embed.element);
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  mountApp(document.getElementById("app")!);
}
