// Left navigation pane and the middle mushaf pane with the Selected Ayah
// Textbox. Clicking an ayah selects it; highlighting text inside the textbox
// stages a selection for the stats/splitter panels.

import type { ApiClient, Meta, Page } from "./api.js";
import { clear, el, errorBox, option } from "./dom.js";
import { latestGuard, Store } from "./state.js";

const STEP_SIZES = [-100, -10, -1, 1, 10, 100];

export class Explorer {
  private meta: Meta | null = null;
  private page: Page | null = null;
  private guardPage = latestGuard();

  readonly navPane = el("div", { class: "pane nav-pane" });
  readonly mushafPane = el("div", { class: "pane mushaf-pane" });

  constructor(
    private api: ApiClient,
    private store: Store,
  ) {
    store.subscribe(() => this.refresh());
  }

  async start(): Promise<void> {
    try {
      this.meta = await this.api.meta();
    } catch (error) {
      this.navPane.append(errorBox((error as Error).message));
      return;
    }
    this.renderNav();
    await this.refresh();
  }

  totalPages(): number {
    return this.meta?.totals.pages ?? 1;
  }

  /** Clamp mirrors the engine's page stepping: never past either bound. */
  stepPage(delta: number): void {
    const current = this.store.get().pageNo;
    const next = Math.max(1, Math.min(this.totalPages(), current + delta));
    if (next !== current) {
      this.store.update({ pageNo: next, selectedAyahSerial: null, selectionStart: null, selectionEnd: null });
    }
  }

  async navigateTo(anchor: { surah?: number; juz?: number; rub?: number; page?: number }): Promise<void> {
    try {
      const target = await this.api.navigate(anchor);
      this.store.update({
        pageNo: target.page_no,
        selectedAyahSerial: target.ayah_serial_no,
        selectionStart: null,
        selectionEnd: null,
      });
    } catch (error) {
      this.showMushafError((error as Error).message);
    }
  }

  async showAyah(serial: number): Promise<void> {
    try {
      const ayah = await this.api.ayah(serial);
      this.store.update({
        pageNo: ayah.page_no,
        selectedAyahSerial: serial,
        selectionStart: null,
        selectionEnd: null,
      });
    } catch (error) {
      this.showMushafError((error as Error).message);
    }
  }

  private renderNav(): void {
    const meta = this.meta!;
    clear(this.navPane);

    const surahSelect = el("select", { class: "nav-surah", "aria-label": "surah" });
    for (const surah of meta.surahs) {
      surahSelect.append(option(String(surah.surah_serial_no), `${surah.surah_serial_no}. ${surah.name}`));
    }
    surahSelect.addEventListener("change", () => {
      void this.navigateTo({ surah: Number(surahSelect.value) });
    });

    const numberInput = (cls: string, max: number, go: (value: number) => void) => {
      const input = el("input", { class: cls, type: "number", min: "1", max: String(max), value: "1" });
      const button = el("button", { class: `${cls}-go`, type: "button" }, ["Go"]);
      button.addEventListener("click", () => go(Number(input.value)));
      return el("div", { class: "nav-row" }, [input, button]);
    };

    this.navPane.append(
      el("h2", {}, ["Navigate"]),
      el("label", {}, ["Surah"]),
      surahSelect,
      el("label", {}, ["Juz"]),
      numberInput("nav-juz", meta.totals.juzs, (j) => void this.navigateTo({ juz: j })),
      el("label", {}, ["Rub"]),
      numberInput("nav-rub", meta.totals.rubs, (r) => void this.navigateTo({ rub: r })),
      el("label", {}, ["Page"]),
      numberInput("nav-page", meta.totals.pages, (p) => void this.navigateTo({ page: p })),
    );

    const steppers = el("div", { class: "steppers" });
    for (const delta of STEP_SIZES) {
      const button = el(
        "button",
        { class: "stepper", type: "button", "data-step": String(delta) },
        [delta > 0 ? `+${delta}` : String(delta)],
      );
      button.addEventListener("click", () => this.stepPage(delta));
      steppers.append(button);
    }
    this.navPane.append(el("label", {}, ["Step pages"]), steppers);
  }

  private showMushafError(message: string): void {
    clear(this.mushafPane).append(errorBox(message));
  }

  private async refresh(): Promise<void> {
    const state = this.store.get();
    if (this.meta === null) return;
    if (this.page?.page_no !== state.pageNo) {
      let page: Page | undefined;
      try {
        page = await this.guardPage(this.api.page(state.pageNo));
      } catch (error) {
        this.showMushafError((error as Error).message);
        return;
      }
      if (page === undefined) return; // a newer navigation superseded this one
      this.page = page;
    }
    this.renderMushaf();
  }

  private renderMushaf(): void {
    const page = this.page!;
    const state = this.store.get();
    clear(this.mushafPane);

    this.mushafPane.append(
      el("div", { class: "page-header" }, [
        `Page ${page.page_no} / ${page.total_pages} — Juz ${page.juz_no} — Rub ${page.rub_no}`,
      ]),
    );

    const pageBox = el("div", { class: "quran-page", dir: "rtl", lang: "ar" });
    for (const ayah of page.ayahs) {
      const node = el(
        "span",
        {
          class:
            "ayah" + (ayah.ayah_serial_no === state.selectedAyahSerial ? " selected" : ""),
          "data-serial": String(ayah.ayah_serial_no),
        },
        [ayah.text, ` ﴿${ayah.ayah_no_in_surah}﴾ `],
      );
      node.addEventListener("click", () => {
        this.store.update({
          selectedAyahSerial: ayah.ayah_serial_no,
          selectionStart: null,
          selectionEnd: null,
        });
      });
      pageBox.append(node);
    }
    this.mushafPane.append(pageBox);

    const selected = page.ayahs.find((a) => a.ayah_serial_no === state.selectedAyahSerial);
    const textbox = el("textarea", {
      class: "selected-ayah-box",
      dir: "rtl",
      lang: "ar",
      readonly: "readonly",
      "aria-label": "Selected Ayah Textbox",
    });
    const serialLine = el("div", { class: "selected-ayah-serial" });
    if (selected) {
      textbox.value = selected.text;
      serialLine.textContent = `Ayah Serial No: ${selected.ayah_serial_no}`;
      textbox.addEventListener("select", () => {
        const { selectionStart, selectionEnd } = textbox;
        if (selectionStart !== null && selectionEnd !== null && selectionStart < selectionEnd) {
          this.store.update({ selectionStart, selectionEnd });
        }
      });
    } else {
      textbox.value = "";
      serialLine.textContent = "click an ayah to select it";
    }
    this.mushafPane.append(
      el("div", { class: "selected-ayah" }, [serialLine, textbox]),
    );
  }
}
