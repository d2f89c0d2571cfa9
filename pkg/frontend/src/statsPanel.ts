// Stats Manager tab: four granularity sub-tabs rendering label/value rows
// straight from the API.

import type { ApiClient, StatsReport } from "./api.js";
import { clear, el, errorBox } from "./dom.js";
import type { Granularity } from "./state.js";
import { latestGuard, Store } from "./state.js";

const GRANULARITIES: Granularity[] = ["surah", "ayah", "word", "selection"];

export class StatsPanel {
  readonly root = el("div", { class: "stats-panel" });
  private tabs = el("div", { class: "granularity-tabs" });
  private body = el("div", { class: "stats-body" });
  private wordSerialInput = el("input", { type: "number", min: "1", value: "1", class: "word-serial" });
  private guard = latestGuard();

  constructor(
    private api: ApiClient,
    private store: Store,
  ) {
    for (const granularity of GRANULARITIES) {
      const button = el(
        "button",
        { type: "button", class: "gran-tab", "data-granularity": granularity },
        [granularity[0].toUpperCase() + granularity.slice(1)],
      );
      button.addEventListener("click", () => store.update({ statsGranularity: granularity }));
      this.tabs.append(button);
    }
    this.wordSerialInput.addEventListener("change", () => void this.refresh());
    this.root.append(this.tabs, this.body);
    store.subscribe(() => void this.refresh());
  }

  async refresh(): Promise<void> {
    const state = this.store.get();
    if (state.rightTab !== "stats") return;
    for (const button of this.tabs.querySelectorAll("button")) {
      button.classList.toggle("active", button.dataset.granularity === state.statsGranularity);
    }
    let work: Promise<StatsReport>;
    const note = (message: string) => {
      clear(this.body).append(el("div", { class: "hint" }, [message]));
    };
    if (state.statsGranularity === "surah" || state.statsGranularity === "ayah") {
      if (state.selectedAyahSerial === null) {
        note("select an ayah in the mushaf pane first");
        return;
      }
      if (state.statsGranularity === "ayah") {
        work = this.api.statsAyah(state.selectedAyahSerial);
      } else {
        const ayah = await this.api.ayah(state.selectedAyahSerial);
        work = this.api.statsSurah(ayah.surah_serial_no);
      }
    } else if (state.statsGranularity === "word") {
      work = this.api.statsWord(Number(this.wordSerialInput.value));
    } else {
      if (
        state.selectedAyahSerial === null ||
        state.selectionStart === null ||
        state.selectionEnd === null
      ) {
        note("highlight part of the selected ayah in the textbox first");
        return;
      }
      work = this.api.statsSelection({
        ayah_serial_no: state.selectedAyahSerial,
        start_offset: state.selectionStart,
        end_offset: state.selectionEnd,
      });
    }
    let report;
    try {
      report = await this.guard(work);
    } catch (error) {
      clear(this.body).append(errorBox((error as Error).message));
      return;
    }
    if (report === undefined) return;
    this.render(report);
  }

  private render(report: StatsReport): void {
    clear(this.body);
    if (report.granularity === "word") {
      this.body.append(el("label", {}, ["Word serial "]), this.wordSerialInput);
    }
    const table = el("table", { class: "stats-table" });
    for (const row of report.rows) {
      table.append(
        el("tr", {}, [
          el("td", { class: "stat-label" }, [row.label]),
          el("td", { class: "stat-value", dir: "auto" }, [String(row.value)]),
        ]),
      );
    }
    this.body.append(table);
  }
}
