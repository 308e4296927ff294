/** Typed client for the diagnet HTTP API (see docs/api.md in the repo root). */

export interface SessionInfo {
  session_id: string;
  patient_label: string;
  kb_version: number;
  cursor: number;
  answered: number;
  total_symptoms: number;
  finalized: boolean;
  created_at: string;
  finalized_at: string | null;
}

export interface Question {
  done: boolean;
  symptom_index?: number;
  symptom?: string;
  indicators?: string[];
}

export interface ChartBar {
  d: number;
  name: string;
  agreement_pct: number;
  likelihood_pct: number | null;
}

export interface ChartReference {
  mean_pct: number;
  mean_plus_sigma_pct: number;
  mean_plus_2sigma_pct: number;
}

export interface ChartBundle {
  bars: ChartBar[];
  reference: ChartReference | null;
}

export interface DiseaseRow {
  d: number;
  name: string;
  agreement: number;
  likelihood: number | null;
  delta: number | null;
}

export interface ResultPayload {
  selected: number;
  selected_name: string;
  reliability: string;
  kb_version: number;
  diseases: DiseaseRow[];
  stats: { mean: number; sigma: number; deltas: Record<string, number> | null };
}

export interface Report {
  report_id: string;
  created_at: string;
  patient_label: string;
  kb_version: number;
  status: "ok" | "no_signal";
  result: ResultPayload | null;
  chart: ChartBundle | null;
  summary: string;
}

export interface ReportListEntry {
  report_id: string;
  created_at: string;
  patient_label: string;
  status: string;
  selected: number | null;
  selected_name: string | null;
}

export interface WeightEntry {
  d: number;
  s: number;
  i: number;
  w: string;
}

export interface KbPayload {
  version: number;
  diseases: { index: number; name: string }[];
  symptoms: { index: number; name: string }[];
  indicators: Record<string, string[]>;
  weights: WeightEntry[];
}

export interface ProfileEntry {
  d: number;
  name: string;
  lo_percent: number;
  lo_exact_percent: number;
  delta_sigma: number;
}

export interface ProfilePayload {
  kb_version: number;
  entries: ProfileEntry[];
  mean_percent: number;
  sigma_percent: number;
  max: { percent: number; diseases: number[] };
  min: { percent: number; diseases: number[] };
}

export interface SelftestRun {
  result: ResultPayload;
  chart: ChartBundle;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: unknown,
  ) {
    super(`HTTP ${status}: ${JSON.stringify(detail)}`);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private base: string = "",
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(this.base + path, init);
    const payload = await response.json().catch(() => null);
    if (!response.ok) {
      throw new ApiError(response.status, payload?.detail ?? payload);
    }
    return payload as T;
  }

  async createSession(patientLabel: string): Promise<SessionInfo> {
    const body = await this.request<{ session: SessionInfo }>(
      "POST", "/sessions", { patient_label: patientLabel });
    return body.session;
  }

  async getSession(sessionId: string): Promise<SessionInfo> {
    const body = await this.request<{ session: SessionInfo }>(
      "GET", `/sessions/${sessionId}`);
    return body.session;
  }

  nextQuestion(sessionId: string): Promise<Question> {
    return this.request<Question>("GET", `/sessions/${sessionId}/question`);
  }

  async answer(sessionId: string, indicatorIndex: number): Promise<SessionInfo> {
    const body = await this.request<{ session: SessionInfo }>(
      "POST", `/sessions/${sessionId}/answer`, { indicator_index: indicatorIndex });
    return body.session;
  }

  async skip(sessionId: string): Promise<SessionInfo> {
    const body = await this.request<{ session: SessionInfo }>(
      "POST", `/sessions/${sessionId}/answer`, { skip: true });
    return body.session;
  }

  async finalize(sessionId: string): Promise<Report> {
    const body = await this.request<{ report: Report }>(
      "POST", `/sessions/${sessionId}/finalize`);
    return body.report;
  }

  async listReports(): Promise<ReportListEntry[]> {
    const body = await this.request<{ reports: ReportListEntry[] }>("GET", "/reports");
    return body.reports;
  }

  async getReport(reportId: string): Promise<Report> {
    const body = await this.request<{ report: Report }>("GET", `/reports/${reportId}`);
    return body.report;
  }

  async getKb(): Promise<KbPayload> {
    const body = await this.request<{ kb: KbPayload }>("GET", "/kb");
    return body.kb;
  }

  async patchWeight(
    d: number, s: number, i: number, w: string | number, expectedVersion: number,
  ): Promise<number> {
    const body = await this.request<{ version: number }>(
      "PATCH", "/kb/weights", { d, s, i, w, expected_version: expectedVersion });
    return body.version;
  }

  async selftestProfile(): Promise<ProfilePayload> {
    const body = await this.request<{ profile: ProfilePayload }>("GET", "/selftest");
    return body.profile;
  }

  selftestDisease(d: number): Promise<SelftestRun> {
    return this.request<SelftestRun>("GET", `/selftest/${d}`);
  }
}
