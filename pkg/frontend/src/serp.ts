/** Result cards: the seven labelled parts of one change hit.
 *
 * Parts (data-part attribute):
 *   replay-addition, replay-pre, snippet, replay-post,
 *   lifespan, slide-link, animate-link
 * Every card renders all seven; bounds that are open-ended render an
 * explicit "unknown" placeholder instead of a link or date.
 */

import type { IntervalJson, SearchHitJson, VersionRefJson } from "./types.js";

const MARK_CLASS: Record<string, string> = {
  kept: "tok-kept",
  added: "tok-added",
  deleted: "tok-deleted",
  ellipsis: "tok-ellipsis",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function shortDate(iso: string): string {
  return iso.slice(0, 10);
}

function intervalText(interval: IntervalJson | null, openLabel: string): string {
  if (!interval) return openLabel;
  return `between ${shortDate(interval.start)} and ${shortDate(interval.end ?? "")}`;
}

function replayPart(
  part: string,
  label: string,
  ref: VersionRefJson | null,
  href: string | null,
): HTMLElement {
  const wrap = el("div", "hit-part");
  wrap.dataset.part = part;
  wrap.append(el("span", "part-label", label));
  if (ref && href) {
    const link = el("a", "replay-link", shortDate(ref.captureDatetime));
    link.href = href;
    link.title = `replay the ${label.toLowerCase()} capture`;
    wrap.append(link);
  } else {
    wrap.append(el("span", "unknown", "unknown (before first capture)"));
  }
  return wrap;
}

export function renderSnippet(hit: SearchHitJson): HTMLElement {
  const box = el("div", "hit-part snippet");
  box.dataset.part = "snippet";
  for (const token of hit.snippet) {
    box.append(el("span", MARK_CLASS[token.mark] ?? "tok-kept", token.text));
    box.append(document.createTextNode(" "));
  }
  return box;
}

export function renderHitCard(hit: SearchHitJson): HTMLElement {
  const card = el("article", "hit-card");
  card.dataset.chain = String(hit.chainId);
  card.dataset.transition = String(hit.transitionIndex);

  const heading = el("h3");
  heading.append(el("span", "hit-url", hit.canonicalUrl));
  heading.append(
    el(
      "span",
      hit.partial ? "badge badge-partial" : "badge badge-full",
      hit.partial ? `partial (${hit.delta} occurrence${hit.delta === 1 ? "" : "s"})` : `full (${hit.delta} occurrence${hit.delta === 1 ? "" : "s"})`,
    ),
  );
  card.append(heading);

  card.append(
    el(
      "p",
      "change-when",
      `changed ${intervalText(
        { start: hit.changeInterval.start, end: hit.changeInterval.end },
        "at an unknown time",
      )}`,
    ),
  );

  // 1: addition version replay
  card.append(
    replayPart("replay-addition", "Addition", hit.additionVersion, hit.links.replayAddition),
  );
  // 2: pre-change replay
  card.append(replayPart("replay-pre", "Before change", hit.preChange, hit.links.replayPre));
  // 3: diff snippet
  card.append(renderSnippet(hit));
  // 4: post-change replay
  card.append(replayPart("replay-post", "After change", hit.postChange, hit.links.replayPost));

  // 5: lifespan
  const lifespan = el("div", "hit-part");
  lifespan.dataset.part = "lifespan";
  lifespan.append(el("span", "part-label", "Lifespan"));
  if (hit.lifespan) {
    const added = intervalText(hit.lifespan.added, "unknown (before first capture)");
    const removed = intervalText(hit.lifespan.removed, "still present at last capture");
    lifespan.append(el("span", undefined, `added ${added}; removed ${removed}`));
  } else {
    lifespan.append(el("span", "unknown", "unknown"));
  }
  card.append(lifespan);

  // 6: sliding diff link
  const slide = el("div", "hit-part");
  slide.dataset.part = "slide-link";
  const slideLink = el("a", "action-link", "Sliding diff of all versions");
  slideLink.href = hit.links.slide;
  slideLink.dataset.action = "slide";
  slide.append(slideLink);
  card.append(slide);

  // 7: animation link
  const anim = el("div", "hit-part");
  anim.dataset.part = "animate-link";
  const animLink = el("a", "action-link", "Animate this change");
  animLink.href = hit.links.animate;
  animLink.dataset.action = "animate";
  anim.append(animLink);
  card.append(anim);

  return card;
}

export function renderHitList(hits: SearchHitJson[], total: number): HTMLElement {
  const wrap = el("section", "results");
  wrap.append(el("p", "result-count", `${total} result${total === 1 ? "" : "s"}`));
  for (const hit of hits) {
    wrap.append(renderHitCard(hit));
  }
  return wrap;
}

export function renderError(code: string, message: string): HTMLElement {
  const box = el("div", "error-box");
  box.dataset.errorCode = code;
  box.append(el("strong", undefined, code));
  box.append(el("span", undefined, ` ${message}`));
  return box;
}
