// Fixture API: serves the toy corpus (2 surahs / 3 ayahs) through the same
// JSON shapes as the engine, so panel and flow tests run without a backend.

import type { Ayah, Grid, Meta, Page, QueryPage, StatsReport, Topic } from "../src/api.js";

export const AYAHS: Ayah[] = [
  {
    ayah_serial_no: 1,
    surah_serial_no: 1,
    surah_name: "الفاتحة",
    ayah_no_in_surah: 1,
    text: "بِسۡمِ ٱللَّهِ ٱلرَّحۡمَٰنِ",
    text_no_tashkeel: "بسم ٱلله ٱلرحمن",
    page_no: 1,
    juz_no: 1,
    rub_no: 1,
  },
  {
    ayah_serial_no: 2,
    surah_serial_no: 1,
    surah_name: "الفاتحة",
    ayah_no_in_surah: 2,
    text: "ٱلۡحَمۡدُ لِلَّهِ رَبِّ",
    text_no_tashkeel: "ٱلحمد لله رب",
    page_no: 1,
    juz_no: 1,
    rub_no: 2,
  },
  {
    ayah_serial_no: 3,
    surah_serial_no: 2,
    surah_name: "الفلق",
    ayah_no_in_surah: 1,
    text: "رَبِّ ٱلۡفَلَقِ",
    text_no_tashkeel: "رب ٱلفلق",
    page_no: 2,
    juz_no: 2,
    rub_no: 3,
  },
];

export const META: Meta = {
  api_version: "1",
  content_hash: "fixture",
  totals: { surahs: 2, ayahs: 3, words: 8, letters: 30, pages: 2, juzs: 2, rubs: 3 },
  limits: { row_limit: 10000, timeout_seconds: 30 },
  surahs: [
    { surah_serial_no: 1, name: "الفاتحة", ayah_count: 2 },
    { surah_serial_no: 2, name: "الفلق", ayah_count: 1 },
  ],
};

export const PAGES: Record<number, Page> = {
  1: { page_no: 1, total_pages: 2, juz_no: 1, rub_no: 1, ayahs: [AYAHS[0], AYAHS[1]] },
  2: { page_no: 2, total_pages: 2, juz_no: 2, rub_no: 3, ayahs: [AYAHS[2]] },
};

export const MAIN_GRID: Grid = {
  columns: ["UniqueWordId", "Word", "Count", "AyahSerialNo", "Ayah"],
  rows: [
    [6, "رَبِّ", 2, 3, "رَبِّ ٱلۡفَلَقِ"],
    [2, "ٱللَّهِ", 1, 1, "بِسۡمِ ٱللَّهِ ٱلرَّحۡمَٰنِ"],
  ],
  links: [
    { row: 0, column: 1, kind: "Subquery", hyperlink_id: 1, value: 6 },
    { row: 1, column: 1, kind: "Subquery", hyperlink_id: 1, value: 2 },
    { row: 0, column: 4, kind: "AyahSerialNo", hyperlink_id: 2, value: 3 },
    { row: 1, column: 4, kind: "AyahSerialNo", hyperlink_id: 2, value: 1 },
  ],
  truncated: false,
  execution_ms: 0.4,
  detail: null,
};

export const DETAIL_GRID: Grid = {
  columns: ["AyahSerialNo", "Ayah", "SurahSerialNo", "SurahName"],
  rows: [
    [2, "ٱلۡحَمۡدُ لِلَّهِ رَبِّ", 1, "الفاتحة"],
    [3, "رَبِّ ٱلۡفَلَقِ", 2, "الفلق"],
  ],
  links: [],
  truncated: false,
  execution_ms: 0.2,
  detail: null,
};

export const QUERY_PAGE: QueryPage = {
  id: "q0001",
  title: "Word frequency",
  description: "How often each vocalized form occurs.",
  state: "Published",
  topic_path: ["Corpus numbers"],
  documentation_name: null,
  main_sql: "SELECT ...",
  detail_sql: "SELECT ...",
  parameters: [
    {
      sequence_no: 1,
      display_name: "Surah Name",
      name: "@SurahNo",
      input_method: "Dropdown",
      data_type: "Integer",
      default_value: "0",
      dropdown_source: "surahs_with_all",
    },
  ],
  hyperlink_columns: [
    { hyperlink_id: 1, info_type: "Subquery", backing_column: "UniqueWordId", targeted_column: "Word" },
    { hyperlink_id: 2, info_type: "AyahSerialNo", backing_column: "AyahSerialNo", targeted_column: "Ayah" },
  ],
  rejection_reason: null,
};

export const TOC: Topic = {
  name: "",
  children: [{ name: "Corpus numbers", children: [], query_ids: ["q0001"] }],
  query_ids: [],
};

function statsFor(granularity: string, rows: [string, number | string][]): StatsReport {
  return { granularity, rows: rows.map(([label, value]) => ({ label, value })) };
}

export interface FetchLogEntry {
  method: string;
  path: string;
  body: unknown;
}

/** Install a fetch stub serving the fixture corpus; returns the request log. */
export function installFixtureFetch(): FetchLogEntry[] {
  const log: FetchLogEntry[] = [];

  const json = (data: unknown, status = 200) =>
    new Response(JSON.stringify(data), {
      status,
      headers: { "Content-Type": "application/json" },
    });

  globalThis.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = new URL(String(input), "http://fixture.test");
    const path = url.pathname;
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    log.push({ method, path, body });

    if (path === "/api/meta") return json(META);
    const pageMatch = path.match(/^\/api\/pages\/(\d+)$/);
    if (pageMatch) {
      const page = PAGES[Number(pageMatch[1])];
      return page
        ? json(page)
        : json({ code: "not_found", message: "page out of range", detail: null }, 404);
    }
    const ayahMatch = path.match(/^\/api\/ayahs\/(\d+)$/);
    if (ayahMatch) {
      const ayah = AYAHS[Number(ayahMatch[1]) - 1];
      return ayah
        ? json(ayah)
        : json({ code: "not_found", message: "ayah out of range", detail: null }, 404);
    }
    if (path === "/api/navigate") {
      const surah = url.searchParams.get("surah");
      const juz = url.searchParams.get("juz");
      if (surah === "2" || juz === "2") return json({ page_no: 2, ayah_serial_no: 3 });
      return json({ page_no: 1, ayah_serial_no: 1 });
    }
    const statsSurah = path.match(/^\/api\/stats\/surah\/(\d+)$/);
    if (statsSurah) {
      return json(
        statsFor("surah", [
          ["Surah Serial No", Number(statsSurah[1])],
          ["Ayah Count", Number(statsSurah[1]) === 1 ? 2 : 1],
        ]),
      );
    }
    const statsAyah = path.match(/^\/api\/stats\/ayah\/(\d+)$/);
    if (statsAyah) {
      return json(
        statsFor("ayah", [
          ["Ayah Serial No", Number(statsAyah[1])],
          ["Word Count", AYAHS[Number(statsAyah[1]) - 1]?.text.split(" ").length ?? 0],
        ]),
      );
    }
    if (path.startsWith("/api/stats/word/")) {
      return json(statsFor("word", [["Word Serial No", Number(path.split("/").pop())]]));
    }
    if (path === "/api/stats/selection") {
      return json(statsFor("selection", [["Selected Text", "…"], ["Word Count", 1]]));
    }
    if (path === "/api/split") {
      return json({ grouping: "none", rows: [{ row_no: 1, token: "ب" }] });
    }
    if (path === "/api/wiki/toc") return json(TOC);
    if (path === "/api/wiki/queries/q0001") return json(QUERY_PAGE);
    if (path === "/api/wiki/queries/q0001/run") {
      return json({ job_id: "j1", state: "Done", grid: MAIN_GRID });
    }
    if (path === "/api/wiki/queries/q0001/detail") {
      return json({ grid: DETAIL_GRID });
    }
    return json({ code: "not_found", message: `no fixture for ${method} ${path}`, detail: null }, 404);
  }) as typeof fetch;

  return log;
}

export async function waitFor(predicate: () => boolean, timeoutMs = 2000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (!predicate()) {
    if (Date.now() > deadline) throw new Error("waitFor timed out");
    await new Promise((resolve) => setTimeout(resolve, 5));
  }
}
