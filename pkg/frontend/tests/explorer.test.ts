// Explorer flow tests against the fixture corpus: ayah selection populating
// the Selected Ayah Textbox, page stepper clamping, Subquery detail grids and
// AyahSerialNo navigation.

import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { mountApp, type App } from "../src/main.js";
import { AYAHS, installFixtureFetch, waitFor, type FetchLogEntry } from "./fixtures.js";

let log: FetchLogEntry[];
let app: App;
let root: HTMLElement;

function pageHeader(): string {
  return root.querySelector(".page-header")?.textContent ?? "";
}

function clickStepper(delta: number): void {
  const button = root.querySelector<HTMLButtonElement>(`.stepper[data-step="${delta}"]`);
  expect(button).not.toBeNull();
  button!.click();
}

beforeEach(async () => {
  window.__mushafTestMode = true;
  window.location.hash = "";
  log = installFixtureFetch();
  document.body.innerHTML = '<div id="app"></div>';
  root = document.getElementById("app")!;
  app = mountApp(root, new ApiClient(""), window);
  await app.ready;
  await waitFor(() => root.querySelectorAll(".ayah").length > 0);
});

describe("ayah selection", () => {
  it("clicking an ayah populates the Selected Ayah Textbox with text and serial", async () => {
    const ayah = root.querySelector<HTMLElement>('.ayah[data-serial="2"]');
    expect(ayah).not.toBeNull();
    ayah!.click();
    await waitFor(() =>
      (root.querySelector<HTMLTextAreaElement>(".selected-ayah-box")?.value ?? "") !== "",
    );
    const textbox = root.querySelector<HTMLTextAreaElement>(".selected-ayah-box")!;
    expect(textbox.value).toBe(AYAHS[1].text);
    expect(root.querySelector(".selected-ayah-serial")!.textContent).toBe("Ayah Serial No: 2");
    expect(ayah!.className).toContain("ayah");
  });

  it("selection state deep-links through the URL hash", async () => {
    root.querySelector<HTMLElement>('.ayah[data-serial="1"]')!.click();
    await waitFor(() => window.location.hash.includes("ayah=1"));
    expect(window.location.hash).toContain("page=1");
  });
});

describe("page steppers", () => {
  it("clamps at the lower bound: -10 on page 1 stays on page 1", async () => {
    expect(pageHeader()).toContain("Page 1");
    const fetches = log.length;
    clickStepper(-10);
    await new Promise((resolve) => setTimeout(resolve, 20));
    expect(pageHeader()).toContain("Page 1");
    // clamped in place: no new page fetch was issued
    expect(log.slice(fetches).filter((e) => e.path.startsWith("/api/pages/"))).toHaveLength(0);
  });

  it("steps forward and clamps at the upper bound", async () => {
    clickStepper(1);
    await waitFor(() => pageHeader().includes("Page 2"));
    clickStepper(100);
    await new Promise((resolve) => setTimeout(resolve, 20));
    expect(pageHeader()).toContain("Page 2");
    clickStepper(-1);
    await waitFor(() => pageHeader().includes("Page 1"));
  });
});

describe("navigation anchors", () => {
  it("navigating by juz jumps the mushaf pane and selects the first ayah", async () => {
    const juzInput = root.querySelector<HTMLInputElement>(".nav-juz")!;
    juzInput.value = "2";
    root.querySelector<HTMLButtonElement>(".nav-juz-go")!.click();
    await waitFor(() => pageHeader().includes("Page 2"));
    expect(root.querySelector(".selected-ayah-serial")!.textContent).toBe("Ayah Serial No: 3");
  });
});

describe("wiki grids", () => {
  async function openRunTabAndRun(): Promise<void> {
    app.store.update({ rightTab: "wiki", wikiQueryId: "q0001" });
    await waitFor(() => root.querySelector(".query-tabs") !== null);
    root.querySelector<HTMLButtonElement>('.query-tab[data-tab="Run"]')!.click();
    await waitFor(() => root.querySelector(".run-query") !== null);
    root.querySelector<HTMLButtonElement>(".run-query")!.click();
    await waitFor(() => root.querySelector(".main-grid") !== null);
  }

  it("a Subquery hyperlink cell loads the detail grid beneath the main grid", async () => {
    await openRunTabAndRun();
    expect(root.querySelector(".detail-grid")).toBeNull();
    const link = root.querySelector<HTMLAnchorElement>('.main-grid .cell-link[data-kind="Subquery"]')!;
    expect(link.textContent).toBe("رَبِّ");
    link.click();
    await waitFor(() => root.querySelector(".detail-grid") !== null);
    // nested under the main grid's container, not replacing it
    const container = root.querySelector(".grid-with-detail")!;
    expect(container.querySelector(".main-grid")).not.toBeNull();
    expect(container.querySelector(".detail-slot .detail-grid")).not.toBeNull();
    const detailRequest = log.find((e) => e.path.endsWith("/detail"));
    expect(detailRequest?.body).toMatchObject({ hyperlink_id: 1 });
  });

  it("an AyahSerialNo cell navigates the mushaf pane to that ayah", async () => {
    await openRunTabAndRun();
    const link = root.querySelector<HTMLAnchorElement>(
      '.main-grid .cell-link[data-kind="AyahSerialNo"]',
    )!;
    link.click(); // first row's Ayah cell carries serial 3 (page 2)
    await waitFor(() => pageHeader().includes("Page 2"));
    expect(app.store.get().selectedAyahSerial).toBe(3);
    await waitFor(
      () => root.querySelector(".selected-ayah-serial")?.textContent === "Ayah Serial No: 3",
    );
    expect(root.querySelector<HTMLTextAreaElement>(".selected-ayah-box")!.value).toBe(
      AYAHS[2].text,
    );
  });
});

describe("stats panel", () => {
  it("renders rows from the API for the selected ayah", async () => {
    root.querySelector<HTMLElement>('.ayah[data-serial="1"]')!.click();
    app.store.update({ rightTab: "stats", statsGranularity: "ayah" });
    await waitFor(() => root.querySelector(".stats-table") !== null);
    const labels = [...root.querySelectorAll(".stat-label")].map((n) => n.textContent);
    expect(labels).toContain("Word Count");
    // every displayed number came over the wire
    expect(log.some((e) => e.path === "/api/stats/ayah/1")).toBe(true);
  });
});
