/** Questionnaire controller: server-driven, one symptom per step.
 *
 * The server owns all state; this controller only mirrors the current
 * question and keeps a client-side history of given answers for display.
 * Refreshing the browser resumes at the server's cursor.
 */

import { ApiClient, Question, Report, SessionInfo } from "./api.js";

export interface HistoryEntry {
  symptom_index: number;
  symptom: string;
  answer: string; // chosen indicator label or "(skipped)"
}

export class WizardController {
  session: SessionInfo | null = null;
  question: Question | null = null;
  history: HistoryEntry[] = [];

  constructor(private api: ApiClient) {}

  get progressLabel(): string {
    if (!this.session) return "";
    return `${this.session.answered}/${this.session.total_symptoms}`;
  }

  get isDone(): boolean {
    return this.question?.done === true;
  }

  async start(patientLabel: string): Promise<void> {
    this.session = await this.api.createSession(patientLabel);
    this.history = [];
    await this.refreshQuestion();
  }

  /** Re-attach to an existing session, e.g. after a browser refresh. */
  async resume(sessionId: string): Promise<void> {
    this.session = await this.api.getSession(sessionId);
    this.history = [];
    if (!this.session.finalized) {
      await this.refreshQuestion();
    }
  }

  async refreshQuestion(): Promise<void> {
    if (!this.session) throw new Error("no active session");
    this.question = await this.api.nextQuestion(this.session.session_id);
  }

  async choose(indicatorIndex: number): Promise<void> {
    if (!this.session || !this.question || this.question.done) {
      throw new Error("no question to answer");
    }
    const q = this.question;
    this.session = await this.api.answer(this.session.session_id, indicatorIndex);
    this.history.push({
      symptom_index: q.symptom_index!,
      symptom: q.symptom!,
      answer: q.indicators![indicatorIndex - 1],
    });
    await this.refreshQuestion();
  }

  async skip(): Promise<void> {
    if (!this.session || !this.question || this.question.done) {
      throw new Error("no question to skip");
    }
    const q = this.question;
    this.session = await this.api.skip(this.session.session_id);
    this.history.push({
      symptom_index: q.symptom_index!,
      symptom: q.symptom!,
      answer: "(skipped)",
    });
    await this.refreshQuestion();
  }

  finalize(): Promise<Report> {
    if (!this.session) throw new Error("no active session");
    return this.api.finalize(this.session.session_id);
  }
}
