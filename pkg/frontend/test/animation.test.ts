// Animated replay document: playback order asserted from the log with
// zero delays, and the pre-playback static state.

import { readFileSync } from "node:fs";
import { JSDOM, VirtualConsole } from "jsdom";
import { describe, expect, it } from "vitest";

const DOC = readFileSync("test/fixtures/animate_niehs_zero_delay.html", "utf-8");

interface LogEntry {
  change?: number;
  action: string;
}

async function runPlayback(): Promise<{ log: LogEntry[]; window: any }> {
  const virtualConsole = new VirtualConsole();
  const dom = new JSDOM(DOC, {
    runScripts: "dangerously",
    pretendToBeVisual: true,
    virtualConsole,
  });
  const win = dom.window as any;
  const deadline = Date.now() + 5000;
  while (Date.now() < deadline) {
    const log: LogEntry[] = win.__playbackLog ?? [];
    if (log.length && log[log.length - 1].action === "end") {
      return { log, window: win };
    }
    await new Promise((resolve) => setTimeout(resolve, 10));
  }
  throw new Error("playback did not finish in time");
}

describe("animation document", () => {
  it("shows deletion spans highlighted before playback", () => {
    const dom = new JSDOM(DOC); // scripts disabled: the static initial state
    const dels = dom.window.document.querySelectorAll(".cd-del");
    expect(dels.length).toBeGreaterThan(0);
    for (const el of dels) {
      expect(el.textContent!.length).toBeGreaterThan(0);
    }
    expect(dom.window.document.querySelectorAll("[data-chg]").length).toBeGreaterThan(0);
  });

  it("visits changes in document order, deletions before co-located insertions", async () => {
    const { log } = await runPlayback();

    const jumps = log.filter((e) => e.action === "jump").map((e) => e.change!);
    expect(jumps.length).toBeGreaterThan(1);
    expect(jumps).toEqual([...jumps].sort((a, b) => a - b));
    expect(new Set(jumps).size).toBe(jumps.length);

    // document order: data-chg ids appear in ascending order in the markup
    const matches = [...DOC.matchAll(/data-chg="(\d+)"/g)].map((m) => Number(m[1]));
    const firstSeen: number[] = [];
    for (const id of matches) {
      if (!firstSeen.includes(id)) firstSeen.push(id);
    }
    expect(jumps).toEqual(firstSeen);

    // within every change, delete precedes insert
    for (const id of jumps) {
      const actions = log
        .filter((e) => e.change === id && (e.action === "delete" || e.action === "insert"))
        .map((e) => e.action);
      const deleteAt = actions.indexOf("delete");
      const insertAt = actions.indexOf("insert");
      if (deleteAt !== -1 && insertAt !== -1) {
        expect(deleteAt).toBeLessThan(insertAt);
      }
    }
    // the fixture transition contains at least one replace (both kinds)
    const both = jumps.filter((id) => {
      const actions = log.filter((e) => e.change === id).map((e) => e.action);
      return actions.includes("delete") && actions.includes("insert");
    });
    expect(both.length).toBeGreaterThan(0);
  });

  it("empties deletion spans and fills insertion spans by the end", async () => {
    const { window } = await runPlayback();
    const doc = window.document;
    for (const el of doc.querySelectorAll(".cd-del")) {
      expect(el.textContent).toBe("");
      expect(el.className).toContain("cd-gone");
    }
    for (const el of doc.querySelectorAll(".cd-ins")) {
      expect(el.textContent).toBe(el.getAttribute("data-full"));
    }
  });

  it("every change in the log is a delete, an insert, or both", async () => {
    const { log } = await runPlayback();
    for (const id of new Set(log.filter((e) => e.change !== undefined).map((e) => e.change))) {
      const actions = log.filter((e) => e.change === id).map((e) => e.action);
      expect(actions[0]).toBe("jump");
      expect(actions[actions.length - 1]).toBe("done");
      expect(actions.includes("delete") || actions.includes("insert")).toBe(true);
    }
  });
});
