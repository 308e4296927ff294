import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { App } from "../src/views.js";
import { FakeBackend, settle } from "./fake_backend.js";

function text(selector: string): string {
  return document.querySelector(selector)?.textContent ?? "";
}

describe("weight editor", () => {
  let backend: FakeBackend;
  let app: App;

  beforeEach(() => {
    document.body.innerHTML = '<div id="app"></div>';
    backend = new FakeBackend();
    app = new App(document.getElementById("app")!,
                  new ApiClient("", backend.fetchImpl));
  });

  it("renders every weight with catalog names and the current version", async () => {
    await app.route("#/weights");
    await settle();
    expect(text('[data-testid="kb-version"]')).toBe("version 1");
    expect(document.querySelectorAll("[data-save]"))
      .toHaveLength(backend.fixture.kb.weights.length);
    const input = document.querySelector(
      '[data-weight="13-41-3"]') as HTMLInputElement;
    expect(input.value).toBe("6");
    const row = input.closest("tr")!;
    expect(row.textContent).toContain("Hypertension");
    expect(row.textContent).toContain("arterial hypertension");
    expect(row.textContent).toContain(">140");
  });

  it("saves an edit with optimistic versioning and reloads", async () => {
    await app.route("#/weights");
    await settle();
    const input = document.querySelector(
      '[data-weight="13-41-3"]') as HTMLInputElement;
    input.value = "0";
    (document.querySelector('[data-save="13-41-3"]') as HTMLElement).click();
    await settle();
    expect(backend.patches).toEqual([
      { d: 13, s: 41, i: 3, w: "0", expected_version: 1 },
    ]);
    expect(text('[data-testid="kb-version"]')).toBe("version 2");
  });

  it("surfaces a conflict prompt on 409 and reloads the table", async () => {
    await app.route("#/weights");
    await settle();
    backend.conflictNextPatch = true;
    (document.querySelector('[data-save="13-41-3"]') as HTMLElement).click();
    await settle();
    expect(backend.patches).toEqual([]);
    const notice = text('[data-testid="conflict"]');
    expect(notice).toContain("changed under you");
    expect(notice).toContain("version 1");
    // the table is live again: a second save on the fresh version succeeds
    (document.querySelector('[data-save="13-41-3"]') as HTMLElement).click();
    await settle();
    expect(backend.patches).toHaveLength(1);
    expect(text('[data-testid="kb-version"]')).toBe("version 2");
  });

  it("shows rejection details for invalid edits", async () => {
    await app.route("#/weights");
    await settle();
    const input = document.querySelector(
      '[data-weight="1-2-2"]') as HTMLInputElement;
    input.value = "totally-not-a-number";
    const backendPatch = backend.fetchImpl;
    // FakeBackend accepts any weight; emulate the server's 400 here
    backend.fetchImpl = async (inp, init) => {
      if ((init?.method ?? "GET") === "PATCH") {
        return new Response(JSON.stringify({ detail: "bad weight value" }),
          { status: 400, headers: { "Content-Type": "application/json" } });
      }
      return backendPatch(inp, init);
    };
    // app holds its own client; route again with a client over the new impl
    document.body.innerHTML = '<div id="app"></div>';
    const rejectingApp = new App(document.getElementById("app")!,
                                 new ApiClient("", (i, n) => backend.fetchImpl(i, n)));
    await rejectingApp.route("#/weights");
    await settle();
    (document.querySelector('[data-save="1-2-2"]') as HTMLElement).click();
    await settle();
    expect(text(".notice")).toContain("edit rejected");
    expect(text(".notice")).toContain("bad weight value");
  });
});

describe("self-test browser", () => {
  it("shows the profile and a disease run with reference lines", async () => {
    document.body.innerHTML = '<div id="app"></div>';
    const backend = new FakeBackend();
    const app = new App(document.getElementById("app")!,
                        new ApiClient("", backend.fetchImpl));
    await app.route("#/selftest/13");
    await settle();
    expect(text('[data-testid="profile-stats"]')).toContain("max 48% at [8, 14]");
    expect(text('[data-testid="profile-stats"]')).toContain("min 24% at [9]");
    expect(text('[data-testid="selftest-banner"]'))
      .toBe("Hypertension — outstanding");
    expect(document.querySelectorAll(".reference-line")).toHaveLength(3);
    const picked = document.querySelector(".disease-picker a.picked")!;
    expect(picked.getAttribute("data-disease")).toBe("13");
  });
});
