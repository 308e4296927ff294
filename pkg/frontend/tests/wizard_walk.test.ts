/** Scripted walk of the full questionnaire against recorded API payloads:
 * 46 real screens, single-choice hypertension-compatible answers, finalize,
 * then the rendered banner and chart are checked against the bundle.
 */

import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { layoutChart } from "../src/chart.js";
import { App } from "../src/views.js";
import { FakeBackend, settle } from "./fake_backend.js";

function click(selector: string): void {
  const node = document.querySelector(selector) as HTMLElement | null;
  if (!node) throw new Error(`nothing matches ${selector}`);
  node.click();
}

function text(selector: string): string {
  return document.querySelector(selector)?.textContent ?? "";
}

describe("questionnaire wizard", () => {
  let backend: FakeBackend;
  let app: App;

  beforeEach(() => {
    document.body.innerHTML = '<div id="app"></div>';
    backend = new FakeBackend();
    app = new App(document.getElementById("app")!,
                  new ApiClient("", backend.fetchImpl));
  });

  it("walks all 46 questions and shows the hypertension result", async () => {
    await app.route("#/wizard");
    (document.querySelector('[data-testid="patient-name"]') as HTMLInputElement)
      .value = "walker";
    click('[data-testid="start"]');
    await settle();

    for (let step = 0; step < 46; step++) {
      const question = backend.fixture.questions[step];
      expect(text('[data-testid="symptom"]'))
        .toBe(`${question.symptom_index}. ${(question as any).symptom}`);
      expect(text('[data-testid="progress"]')).toBe(`${step}/46`);
      const choice = backend.fixture.answers[String(question.symptom_index)];
      if (choice) {
        click(`[data-indicator="${choice}"]`);
      } else {
        click('[data-testid="skip"]');
      }
      await settle();
    }

    expect(document.querySelector('[data-screen="finalize"]')).not.toBeNull();
    click('[data-testid="finalize"]');
    await settle();

    expect(text('[data-testid="banner"]')).toBe("Hypertension");
    expect(text('[data-testid="reliability"]')).toBe("outstanding");

    const lines = Array.from(document.querySelectorAll(".reference-line"));
    expect(lines).toHaveLength(3);
    const reference = backend.fixture.report.chart.reference;
    expect(lines.map((line) => Number(line.getAttribute("data-value"))))
      .toEqual([reference.mean_pct, reference.mean_plus_sigma_pct,
                reference.mean_plus_2sigma_pct]);
    const layout = layoutChart(backend.fixture.report.chart);
    for (const line of lines) {
      expect(Number(line.getAttribute("y1")))
        .toBeCloseTo(layout.valueToY(Number(line.getAttribute("data-value"))), 6);
    }
    // the likelihood table mirrors the bundle, selected row highlighted
    const selected = document.querySelector(".selected-row")!;
    expect(selected.textContent).toContain("Hypertension");
    expect(selected.textContent).toContain("100.0");
    expect(selected.textContent).toContain("35.4");
  });

  it("skip-only walk still reaches the finalize screen", async () => {
    await app.route("#/wizard");
    click('[data-testid="start"]');
    await settle();
    for (let step = 0; step < 46; step++) {
      click('[data-testid="skip"]');
      await settle();
    }
    expect(document.querySelector('[data-testid="finalize"]')).not.toBeNull();
  });

  it("keeps a client-side history of given answers", async () => {
    await app.route("#/wizard");
    click('[data-testid="start"]');
    await settle();
    click('[data-indicator="1"]'); // symptom 1: yes
    await settle();
    click('[data-testid="skip"]');
    await settle();
    const entries = Array.from(document.querySelectorAll(".history li"))
      .map((node) => node.textContent);
    expect(entries).toEqual([
      "2. sudden onset of illness: (skipped)",
      "1. no symptoms: yes",
    ]);
  });

  it("resumes at the server cursor, as after a browser refresh", async () => {
    await app.route("#/wizard");
    click('[data-testid="start"]');
    await settle();
    click('[data-testid="skip"]');
    await settle();

    // fresh App instance, same backend: state lives on the server
    document.body.innerHTML = '<div id="app"></div>';
    const reborn = new App(document.getElementById("app")!,
                           new ApiClient("", backend.fetchImpl));
    await reborn.route("#/wizard/fixture-session");
    await settle();
    expect(text('[data-testid="progress"]')).toBe("1/46");
    expect(text('[data-testid="symptom"]')).toContain("2. sudden onset");
  });

  it("shows a retry screen on request failure without losing the session", async () => {
    let breakRequests = false;
    const flaky = new FakeBackend();
    const api = new ApiClient("", async (input, init) => {
      if (breakRequests) throw new TypeError("network down");
      return flaky.fetchImpl(input, init);
    });
    document.body.innerHTML = '<div id="app"></div>';
    const flakyApp = new App(document.getElementById("app")!, api);

    await flakyApp.route("#/wizard");
    click('[data-testid="start"]');
    await settle();

    breakRequests = true;
    click('[data-testid="skip"]');
    await settle();
    expect(document.querySelector('[data-testid="error"]')).not.toBeNull();
    expect(text('[data-testid="error"]')).toContain("kept on the server");

    breakRequests = false;
    click('[data-testid="retry"]');
    await settle();
    // the failed skip never reached the server: still on question 1
    expect(text('[data-testid="symptom"]')).toContain("1. no symptoms");
    expect(flaky.answered).toBe(0);
  });
});
