// Typed client over the engine's JSON API. Every number shown in the UI
// comes through here; nothing is computed corpus-side in the browser.

export interface SurahSummary {
  surah_serial_no: number;
  name: string;
  ayah_count: number;
}

export interface Meta {
  api_version: string;
  content_hash: string;
  totals: {
    surahs: number;
    ayahs: number;
    words: number;
    letters: number;
    pages: number;
    juzs: number;
    rubs: number;
  };
  limits: { row_limit: number; timeout_seconds: number };
  surahs: SurahSummary[];
}

export interface Ayah {
  ayah_serial_no: number;
  surah_serial_no: number;
  surah_name: string;
  ayah_no_in_surah: number;
  text: string;
  text_no_tashkeel: string;
  page_no: number;
  juz_no: number;
  rub_no: number;
}

export interface Page {
  page_no: number;
  total_pages: number;
  juz_no: number;
  rub_no: number;
  ayahs: Ayah[];
}

export interface StatsRow {
  label: string;
  value: number | string;
}

export interface StatsReport {
  granularity: string;
  rows: StatsRow[];
}

export interface SplitRow {
  row_no?: number;
  token: string;
  count?: number;
}

export interface SplitResult {
  grouping: "none" | "grouped";
  rows: SplitRow[];
}

export interface SplitRequestBody {
  unit: "letters" | "words";
  tashkeel: "with" | "without";
  grouping: "none" | "grouped";
  surah_no?: number;
  ayah_serial_no?: number;
  word_serial_no?: number;
  selection?: SelectionBody;
}

export interface SelectionBody {
  ayah_serial_no: number;
  start_offset: number;
  end_offset: number;
}

export interface CellLink {
  row: number;
  column: number;
  kind: "Subquery" | "AyahSerialNo";
  hyperlink_id: number;
  value: unknown;
}

export interface Grid {
  columns: string[];
  rows: unknown[][];
  links: CellLink[];
  truncated: boolean;
  execution_ms: number;
  detail: Grid | null;
}

export interface RunResponse {
  job_id: string;
  state: string;
  grid?: Grid;
}

export interface Job {
  job_id: string;
  query_id: string;
  state: "Pending" | "Running" | "Done" | "Failed" | "TimedOut";
  result: Grid | null;
  error: { code: string; message: string } | null;
}

export interface ParameterSpec {
  sequence_no: number;
  display_name: string;
  name: string;
  input_method: "TextBox" | "Dropdown";
  data_type: "Alphanumeric" | "Integer";
  default_value: string;
  dropdown_source: string | null;
}

export interface HyperlinkColumn {
  hyperlink_id: number;
  info_type: "Subquery" | "AyahSerialNo";
  backing_column: string;
  targeted_column: string;
}

export interface QueryPage {
  id: string;
  title: string;
  description: string;
  state: string;
  topic_path: string[];
  documentation_name: string | null;
  main_sql: string;
  detail_sql: string | null;
  parameters: ParameterSpec[];
  hyperlink_columns: HyperlinkColumn[];
  rejection_reason: string | null;
}

export interface Topic {
  name: string;
  children: Topic[];
  query_ids: string[];
}

export interface QueryListEntry {
  id: string;
  title: string;
  state: string;
  owner: string;
}

export interface ValidationReport {
  ok: boolean;
  violations: { code: string; message: string }[];
}

export interface ApiError {
  code: string;
  message: string;
  detail: string | null;
}

export class ApiRequestError extends Error {
  constructor(
    public status: number,
    public body: ApiError,
  ) {
    super(body.message);
  }
}

export class ApiClient {
  constructor(
    private base = "",
    public token: string | null = null,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    const response = await fetch(this.base + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      throw new ApiRequestError(response.status, payload as ApiError);
    }
    return payload as T;
  }

  meta(): Promise<Meta> {
    return this.request("GET", "/api/meta");
  }

  page(pageNo: number): Promise<Page> {
    return this.request("GET", `/api/pages/${pageNo}`);
  }

  navigate(anchor: { surah?: number; juz?: number; rub?: number; page?: number }): Promise<{
    page_no: number;
    ayah_serial_no: number;
  }> {
    const params = new URLSearchParams();
    for (const [key, value] of Object.entries(anchor)) {
      if (value !== undefined) params.set(key, String(value));
    }
    return this.request("GET", `/api/navigate?${params}`);
  }

  ayah(serial: number): Promise<Ayah> {
    return this.request("GET", `/api/ayahs/${serial}`);
  }

  statsSurah(surahNo: number): Promise<StatsReport> {
    return this.request("GET", `/api/stats/surah/${surahNo}`);
  }

  statsAyah(serial: number): Promise<StatsReport> {
    return this.request("GET", `/api/stats/ayah/${serial}`);
  }

  statsWord(serial: number): Promise<StatsReport> {
    return this.request("GET", `/api/stats/word/${serial}`);
  }

  statsSelection(selection: SelectionBody): Promise<StatsReport> {
    return this.request("POST", "/api/stats/selection", selection);
  }

  split(body: SplitRequestBody): Promise<SplitResult> {
    return this.request("POST", "/api/split", body);
  }

  toc(): Promise<Topic> {
    return this.request("GET", "/api/wiki/toc");
  }

  queryPage(id: string): Promise<QueryPage> {
    return this.request("GET", `/api/wiki/queries/${id}`);
  }

  documentationUrl(id: string): string {
    return `${this.base}/api/wiki/queries/${id}/documentation`;
  }

  run(id: string, values: Record<string, string>): Promise<RunResponse> {
    return this.request("POST", `/api/wiki/queries/${id}/run`, { values });
  }

  detail(
    id: string,
    values: Record<string, string>,
    hyperlinkId: number,
    row: unknown[],
  ): Promise<{ grid: Grid }> {
    return this.request("POST", `/api/wiki/queries/${id}/detail`, {
      values,
      hyperlink_id: hyperlinkId,
      row,
    });
  }

  submitJob(queryId: string, values: Record<string, string>): Promise<{ job_id: string; state: string }> {
    return this.request("POST", "/api/jobs", { query_id: queryId, values });
  }

  job(jobId: string): Promise<Job> {
    return this.request("GET", `/api/jobs/${jobId}`);
  }

  listQueries(): Promise<{ queries: QueryListEntry[] }> {
    return this.request("GET", "/api/dev/queries");
  }

  devGet(id: string): Promise<QueryPage> {
    return this.request("GET", `/api/dev/queries/${id}`);
  }

  devCreate(body: unknown): Promise<QueryPage> {
    return this.request("POST", "/api/dev/queries", body);
  }

  devUpdate(id: string, body: unknown): Promise<QueryPage> {
    return this.request("PUT", `/api/dev/queries/${id}`, body);
  }

  devDelete(id: string): Promise<{ deleted: string }> {
    return this.request("DELETE", `/api/dev/queries/${id}`);
  }

  devValidate(id: string): Promise<ValidationReport> {
    return this.request("POST", `/api/dev/queries/${id}/validate`);
  }

  devSubmit(id: string): Promise<QueryPage> {
    return this.request("POST", `/api/dev/queries/${id}/submit`);
  }

  devUploadDocumentation(id: string, filename: string, contentBase64: string): Promise<QueryPage> {
    return this.request("PUT", `/api/dev/queries/${id}/documentation`, {
      filename,
      content_base64: contentBase64,
    });
  }
}
