/** Screens: home, questionnaire wizard, result view, self-test browser,
 * weight editor. Every displayed number comes straight from an API payload;
 * the client never rescales or recomputes scores.
 */

import { ApiClient, ApiError, KbPayload, Report, SelftestRun } from "./api.js";
import { renderChart } from "./chart.js";
import { clear, el } from "./dom.js";
import { WizardController } from "./wizard.js";

export class App {
  private api: ApiClient;
  private root: HTMLElement;
  private doc: Document;
  private wizard: WizardController;

  constructor(root: HTMLElement, api: ApiClient, doc?: Document) {
    this.root = root;
    this.api = api;
    this.doc = doc ?? root.ownerDocument;
    this.wizard = new WizardController(api);
  }

  /** Route by location hash: #/, #/wizard[/id], #/selftest, #/weights. */
  async route(hash: string): Promise<void> {
    const parts = hash.replace(/^#\/?/, "").split("/").filter(Boolean);
    if (parts[0] === "wizard") {
      await this.showWizard(parts[1]);
    } else if (parts[0] === "selftest") {
      await this.showSelftest(parts[1] ? Number(parts[1]) : null);
    } else if (parts[0] === "weights") {
      await this.showWeights();
    } else {
      this.showHome();
    }
  }

  private screen(name: string, ...children: (Node | string)[]): HTMLElement {
    clear(this.root);
    const nav = el(this.doc, "nav", { class: "topnav" },
      el(this.doc, "a", { href: "#/" }, "diagnet"),
      el(this.doc, "a", { href: "#/wizard" }, "questionnaire"),
      el(this.doc, "a", { href: "#/selftest" }, "self-test"),
      el(this.doc, "a", { href: "#/weights" }, "weights"),
    );
    const section = el(this.doc, "section",
      { class: `screen screen-${name}`, "data-screen": name }, ...children);
    this.root.append(nav, section);
    return section;
  }

  showHome(): void {
    this.screen("home",
      el(this.doc, "h1", {}, "Diagnostic console"),
      el(this.doc, "div", { class: "options" },
        this.optionCard("#/wizard", "1. Questionnaire diagnosis",
          "Answer 46 symptom questions, one per screen, and get the " +
          "agreement/likelihood distribution."),
        this.optionCard("#/selftest", "2. Self-test",
          "Run a disease's own indicator set through the engine and inspect " +
          "the optimal likelihood profile."),
        this.optionCard("#/weights", "3. Weight editor",
          "Inspect and modify the indicator weights behind the diagnosis."),
      ),
    );
  }

  private optionCard(href: string, title: string, text: string): HTMLElement {
    return el(this.doc, "a", { href, class: "option-card" },
      el(this.doc, "h2", {}, title),
      el(this.doc, "p", {}, text));
  }

  // --- questionnaire -------------------------------------------------------

  async showWizard(sessionId?: string): Promise<void> {
    if (!sessionId) {
      this.renderNameEntry();
      return;
    }
    if (this.wizard.session?.session_id !== sessionId) {
      try {
        await this.wizard.resume(sessionId);
      } catch (err) {
        this.renderWizardError(err, () => this.showWizard(sessionId));
        return;
      }
    }
    if (this.wizard.session?.finalized) {
      const report = await this.api.getReport(sessionId);
      this.renderResult(report);
      return;
    }
    this.renderQuestion();
  }

  private renderNameEntry(): void {
    const input = el(this.doc, "input", {
      type: "text", placeholder: "patient name (optional)",
      "data-testid": "patient-name",
    });
    const button = el(this.doc, "button", { "data-testid": "start" },
      "Start questionnaire");
    button.addEventListener("click", async () => {
      button.disabled = true;
      try {
        await this.wizard.start(input.value);
        location.hash = `#/wizard/${this.wizard.session!.session_id}`;
        this.renderQuestion();
      } catch (err) {
        this.renderWizardError(err, () => {
          this.renderNameEntry();
        });
      }
    });
    this.screen("name-entry",
      el(this.doc, "h1", {}, "New questionnaire"),
      el(this.doc, "p", {},
        "You will see one symptom per screen; pick the matching indicator " +
        "or skip. Answers cannot be revised, and the evaluation runs only " +
        "after the last question."),
      el(this.doc, "div", { class: "name-form" }, input, button),
    );
  }

  private renderQuestion(): void {
    const question = this.wizard.question;
    if (!question) return;
    if (question.done) {
      this.renderFinalizePrompt();
      return;
    }
    const indicators = el(this.doc, "div", { class: "indicators" });
    question.indicators!.forEach((label, idx) => {
      const button = el(this.doc, "button", {
        class: "indicator", "data-indicator": String(idx + 1),
      }, label);
      button.addEventListener("click", () =>
        this.wizardAction(() => this.wizard.choose(idx + 1)));
      indicators.append(button);
    });
    const skip = el(this.doc, "button",
      { class: "skip", "data-testid": "skip" }, "skip");
    skip.addEventListener("click", () =>
      this.wizardAction(() => this.wizard.skip()));

    const history = el(this.doc, "ul", { class: "history" });
    for (const entry of this.wizard.history.slice().reverse()) {
      history.append(el(this.doc, "li", {},
        `${entry.symptom_index}. ${entry.symptom}: ${entry.answer}`));
    }

    this.screen("question",
      el(this.doc, "div", { class: "progress", "data-testid": "progress" },
        this.wizard.progressLabel),
      el(this.doc, "h1", { "data-testid": "symptom" },
        `${question.symptom_index}. ${question.symptom}`),
      indicators,
      skip,
      el(this.doc, "details", {},
        el(this.doc, "summary", {}, "answers so far"), history),
    );
  }

  private renderFinalizePrompt(): void {
    const button = el(this.doc, "button", { "data-testid": "finalize" },
      "Evaluate answers");
    button.addEventListener("click", async () => {
      button.disabled = true;
      try {
        const report = await this.wizard.finalize();
        this.renderResult(report);
      } catch (err) {
        this.renderWizardError(err, () => this.renderFinalizePrompt());
      }
    });
    this.screen("finalize",
      el(this.doc, "h1", {}, "Questionnaire complete"),
      el(this.doc, "p", {}, `All ${this.wizard.session?.total_symptoms ?? 46} ` +
        "questions answered or skipped."),
      button,
    );
  }

  private async wizardAction(action: () => Promise<void>): Promise<void> {
    try {
      await action();
      this.renderQuestion();
    } catch (err) {
      // session state survives on the server; offer a retry
      this.renderWizardError(err, async () => {
        await this.wizard.refreshQuestion();
        this.renderQuestion();
      });
    }
  }

  private renderWizardError(err: unknown, retry: () => void | Promise<void>): void {
    const message = err instanceof ApiError
      ? `request failed (${err.status})` : "network problem";
    const button = el(this.doc, "button", { "data-testid": "retry" }, "retry");
    button.addEventListener("click", () => void retry());
    this.screen("error",
      el(this.doc, "h1", {}, "Something went wrong"),
      el(this.doc, "p", { class: "error", "data-testid": "error" },
        `${message} — your answers are kept on the server.`),
      button,
    );
  }

  // --- result --------------------------------------------------------------

  renderResult(report: Report): void {
    if (report.status === "no_signal" || !report.result || !report.chart) {
      this.screen("result",
        el(this.doc, "h1", { "data-testid": "banner" }, "No signal"),
        el(this.doc, "p", {},
          "No disease received positive excitation; nothing to chart."),
        el(this.doc, "pre", { class: "summary" }, report.summary),
      );
      return;
    }
    const result = report.result;
    const section = this.screen("result",
      el(this.doc, "h1", { "data-testid": "banner" }, result.selected_name),
      el(this.doc, "span", {
        class: `badge badge-${result.reliability}`,
        "data-testid": "reliability",
      }, result.reliability),
      el(this.doc, "p", {},
        `patient: ${report.patient_label} — knowledge base v${report.kb_version}`),
    );
    section.append(renderChart(report.chart, this.doc));
    section.append(this.likelihoodTable(report));
    section.append(el(this.doc, "details", {},
      el(this.doc, "summary", {}, "text report"),
      el(this.doc, "pre", { class: "summary" }, report.summary)));
  }

  private likelihoodTable(report: Report): HTMLElement {
    const table = el(this.doc, "table", { class: "likelihood-table" });
    table.append(el(this.doc, "tr", {},
      el(this.doc, "th", {}, "d"), el(this.doc, "th", {}, "disease"),
      el(this.doc, "th", {}, "A %"), el(this.doc, "th", {}, "L %")));
    for (const bar of report.chart!.bars) {
      const row = el(this.doc, "tr",
        bar.d === report.result!.selected ? { class: "selected-row" } : {},
        el(this.doc, "td", {}, String(bar.d)),
        el(this.doc, "td", {}, bar.name),
        el(this.doc, "td", {}, bar.agreement_pct.toFixed(1)),
        el(this.doc, "td", {},
          bar.likelihood_pct === null ? "-" : bar.likelihood_pct.toFixed(1)));
      table.append(row);
    }
    return table;
  }

  // --- self-test browser ---------------------------------------------------

  async showSelftest(disease: number | null): Promise<void> {
    const [profile, kb] = await Promise.all([
      this.api.selftestProfile(), this.api.getKb()]);
    const picker = el(this.doc, "div", { class: "disease-picker" });
    for (const entry of kb.diseases) {
      picker.append(el(this.doc, "a", {
        href: `#/selftest/${entry.index}`,
        class: entry.index === disease ? "picked" : "",
        "data-disease": String(entry.index),
      }, `${entry.index}. ${entry.name}`));
    }

    const table = el(this.doc, "table", { class: "profile-table" });
    table.append(el(this.doc, "tr", {},
      el(this.doc, "th", {}, "d"), el(this.doc, "th", {}, "disease"),
      el(this.doc, "th", {}, "Lₒ %"), el(this.doc, "th", {}, "Δσ")));
    for (const entry of profile.entries) {
      table.append(el(this.doc, "tr", {},
        el(this.doc, "td", {}, String(entry.d)),
        el(this.doc, "td", {}, entry.name),
        el(this.doc, "td", {}, String(entry.lo_percent)),
        el(this.doc, "td", {}, entry.delta_sigma.toFixed(2))));
    }

    const section = this.screen("selftest",
      el(this.doc, "h1", {}, "Self-test"),
      el(this.doc, "p", { "data-testid": "profile-stats" },
        `kb v${profile.kb_version} — mean ${profile.mean_percent.toFixed(1)}% — ` +
        `sigma ${profile.sigma_percent.toFixed(1)}% — ` +
        `max ${profile.max.percent}% at [${profile.max.diseases.join(", ")}] — ` +
        `min ${profile.min.percent}% at [${profile.min.diseases.join(", ")}]`),
      picker,
    );
    if (disease !== null) {
      const run: SelftestRun = await this.api.selftestDisease(disease);
      section.append(
        el(this.doc, "h2", { "data-testid": "selftest-banner" },
          `${run.result.selected_name} — ${run.result.reliability}`),
        renderChart(run.chart, this.doc));
    }
    section.append(el(this.doc, "details", {},
      el(this.doc, "summary", {}, "full profile"), table));
  }

  // --- weight editor -------------------------------------------------------

  async showWeights(): Promise<void> {
    const kb = await this.api.getKb();
    this.renderWeights(kb, null);
  }

  private renderWeights(kb: KbPayload, notice: string | null): void {
    const diseaseNames = new Map(kb.diseases.map((d) => [d.index, d.name]));
    const symptomNames = new Map(kb.symptoms.map((s) => [s.index, s.name]));

    const table = el(this.doc, "table", { class: "weights-table" });
    table.append(el(this.doc, "tr", {},
      el(this.doc, "th", {}, "disease"), el(this.doc, "th", {}, "symptom"),
      el(this.doc, "th", {}, "indicator"), el(this.doc, "th", {}, "weight"),
      el(this.doc, "th", {}, "")));
    for (const entry of kb.weights) {
      const input = el(this.doc, "input", {
        value: entry.w, size: "5",
        "data-weight": `${entry.d}-${entry.s}-${entry.i}`,
      });
      const save = el(this.doc, "button",
        { "data-save": `${entry.d}-${entry.s}-${entry.i}` }, "save");
      save.addEventListener("click", async () => {
        save.disabled = true;
        try {
          await this.api.patchWeight(
            entry.d, entry.s, entry.i, input.value, kb.version);
          await this.showWeights();
        } catch (err) {
          if (err instanceof ApiError && err.status === 409) {
            const fresh = await this.api.getKb();
            this.renderWeights(fresh,
              "The knowledge base changed under you; table reloaded at " +
              `version ${fresh.version}. Re-apply your edit.`);
          } else {
            const detail = err instanceof ApiError
              ? JSON.stringify(err.detail) : String(err);
            this.renderWeights(kb, `edit rejected: ${detail}`);
          }
        }
      });
      const labels = kb.indicators[String(entry.s)] ?? [];
      table.append(el(this.doc, "tr", {},
        el(this.doc, "td", {}, `${entry.d} ${diseaseNames.get(entry.d) ?? ""}`),
        el(this.doc, "td", {}, `${entry.s} ${symptomNames.get(entry.s) ?? ""}`),
        el(this.doc, "td", {}, labels[entry.i - 1] ?? `slot ${entry.i}`),
        el(this.doc, "td", {}, input),
        el(this.doc, "td", {}, save)));
    }

    this.screen("weights",
      el(this.doc, "h1", {}, "Weight editor"),
      el(this.doc, "p", { "data-testid": "kb-version" }, `version ${kb.version}`),
      notice === null
        ? el(this.doc, "p", { class: "hint" },
          "Weights are exact rationals (e.g. 6, -3, 3/2); 0 deletes an entry. " +
          "Saving uses the version shown here and fails on concurrent edits.")
        : el(this.doc, "p", { class: "notice", "data-testid": "conflict" }, notice),
      table,
    );
  }
}
