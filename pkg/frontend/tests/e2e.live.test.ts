/** Live end-to-end drive against a real service instance.
 *
 * Skipped unless E2E_BASE is set, e.g.:
 *   diagnet serve --kb /tmp/e2e/kb.kbtxt --listen 127.0.0.1:8123 --reports /tmp/e2e/reports
 *   E2E_BASE=http://127.0.0.1:8123 vitest run tests/e2e.live.test.ts
 *
 * Uses a DOM walk of the real UI over real fetch. The weight-edit loop edits
 * (13,41,3) to 0, expects the self-test likelihood to move to the value the
 * CLI computes for that edit (38.0%), and restores the weight afterwards.
 */

import { afterAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { App } from "../src/views.js";
import { settle } from "./fake_backend.js";

const BASE = process.env.E2E_BASE ?? "";

function click(selector: string): void {
  const node = document.querySelector(selector) as HTMLElement | null;
  if (!node) throw new Error(`nothing matches ${selector}`);
  node.click();
}

function text(selector: string): string {
  return document.querySelector(selector)?.textContent ?? "";
}

async function settleUntil(predicate: () => boolean, timeoutMs = 5000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (predicate()) return;
    await settle(4);
  }
  throw new Error("condition never became true");
}

describe.skipIf(!BASE)("live service", () => {
  const api = new ApiClient(BASE);

  afterAll(async () => {
    // restore the shipped weight in case the edit test ran
    try {
      const kb = await api.getKb();
      const entry = kb.weights.find((w) => w.d === 13 && w.s === 41 && w.i === 3);
      if (!entry || entry.w !== "6") {
        await api.patchWeight(13, 41, 3, "6", kb.version);
      }
    } catch {
      // best effort
    }
  });

  it("walks the questionnaire in the browser UI and lands on hypertension", async () => {
    const kb = await api.getKb();
    // single-choice answer set: the positive indicators of disease 13
    const answers = new Map<number, number>();
    for (const w of kb.weights) {
      if (w.d === 13 && !w.w.startsWith("-")) answers.set(w.s, w.i);
    }
    expect(answers.size).toBe(7);

    document.body.innerHTML = '<div id="app"></div>';
    const app = new App(document.getElementById("app")!, api);
    await app.route("#/wizard");
    (document.querySelector('[data-testid="patient-name"]') as HTMLInputElement)
      .value = "live-e2e";
    click('[data-testid="start"]');
    await settleUntil(() => text('[data-testid="symptom"]').includes("1."));

    for (let step = 1; step <= 46; step++) {
      const heading = text('[data-testid="symptom"]');
      const symptomIndex = Number(heading.split(".")[0]);
      const choice = answers.get(symptomIndex);
      if (choice) {
        click(`[data-indicator="${choice}"]`);
      } else {
        click('[data-testid="skip"]');
      }
      await settleUntil(() =>
        text('[data-testid="symptom"]') !== heading
        || document.querySelector('[data-screen="finalize"]') !== null);
    }

    click('[data-testid="finalize"]');
    await settleUntil(() => text('[data-testid="banner"]') !== "");
    expect(text('[data-testid="banner"]')).toBe("Hypertension");

    // rendered reference lines equal the API bundle's values
    const reports = await api.listReports();
    const report = await api.getReport(reports[0].report_id);
    const reference = report.chart!.reference!;
    const lines = Array.from(document.querySelectorAll(".reference-line"));
    expect(lines.map((line) => Number(line.getAttribute("data-value"))))
      .toEqual([reference.mean_pct, reference.mean_plus_sigma_pct,
                reference.mean_plus_2sigma_pct]);
  }, 60000);

  it("edits a weight in the UI and sees the self-test move to the CLI value", async () => {
    document.body.innerHTML = '<div id="app"></div>';
    const app = new App(document.getElementById("app")!, api);
    await app.route("#/weights");
    await settleUntil(() => text('[data-testid="kb-version"]') !== "");
    const versionBefore = Number(text('[data-testid="kb-version"]').split(" ")[1]);

    const input = document.querySelector(
      '[data-weight="13-41-3"]') as HTMLInputElement;
    input.value = "0";
    click('[data-save="13-41-3"]');
    await settleUntil(() =>
      text('[data-testid="kb-version"]') === `version ${versionBefore + 1}`);

    await app.route("#/selftest/13");
    await settleUntil(() =>
      document.querySelector('rect[data-d="13"][data-kind="likelihood"]') !== null);
    const bar = document.querySelector(
      'rect[data-d="13"][data-kind="likelihood"]')!;
    // `diagnet kb set-weight 13 41 3 0` + `diagnet selftest --disease 13` → 38.0
    expect(Number(bar.getAttribute("data-value"))).toBe(38.0);
    const run = await api.selftestDisease(13);
    const apiBar = run.chart.bars.find((b) => b.d === 13)!;
    expect(Number(bar.getAttribute("data-value"))).toBe(apiBar.likelihood_pct);
  }, 60000);
});
