// Text Splitter tab: split the current surah/ayah/word/selection into words
// or letters, with/without tashkeel, optionally grouped with counts.

import type { ApiClient, SplitRequestBody, SplitResult } from "./api.js";
import { clear, el, errorBox, option } from "./dom.js";
import { latestGuard, Store } from "./state.js";

export class SplitterPanel {
  readonly root = el("div", { class: "splitter-panel" });
  private targetSelect = el("select", { class: "split-target" });
  private unitSelect = el("select", { class: "split-unit" });
  private tashkeelSelect = el("select", { class: "split-tashkeel" });
  private groupedBox = el("input", { type: "checkbox", class: "split-grouped" });
  private wordSerialInput = el("input", { type: "number", min: "1", value: "1", class: "split-word-serial" });
  private body = el("div", { class: "split-body" });
  private guard = latestGuard();

  constructor(
    private api: ApiClient,
    private store: Store,
  ) {
    this.targetSelect.append(
      option("surah", "Surah"),
      option("ayah", "Ayah"),
      option("word", "Word"),
      option("selection", "Selection"),
    );
    this.unitSelect.append(option("letters", "into Letters"), option("words", "into Words"));
    this.tashkeelSelect.append(
      option("without", "Without Tashkeel"),
      option("with", "With Tashkeel"),
    );
    const runButton = el("button", { type: "button", class: "split-run" }, ["Split"]);
    runButton.addEventListener("click", () => void this.refresh());
    this.root.append(
      el("div", { class: "split-controls" }, [
        el("label", {}, ["Split current "]),
        this.targetSelect,
        this.unitSelect,
        this.tashkeelSelect,
        el("label", {}, [this.groupedBox, " group with counts"]),
        el("label", {}, ["word serial ", this.wordSerialInput]),
        runButton,
      ]),
      this.body,
    );
    store.subscribe(() => {
      if (store.get().rightTab === "splitter") void this.refresh();
    });
  }

  private async buildRequest(): Promise<SplitRequestBody | string> {
    const state = this.store.get();
    const base = {
      unit: this.unitSelect.value as "letters" | "words",
      tashkeel: this.tashkeelSelect.value as "with" | "without",
      grouping: (this.groupedBox.checked ? "grouped" : "none") as "grouped" | "none",
    };
    const target = this.targetSelect.value;
    if (target === "word") {
      return { ...base, word_serial_no: Number(this.wordSerialInput.value) };
    }
    if (state.selectedAyahSerial === null) {
      return "select an ayah in the mushaf pane first";
    }
    if (target === "ayah") {
      return { ...base, ayah_serial_no: state.selectedAyahSerial };
    }
    if (target === "selection") {
      if (state.selectionStart === null || state.selectionEnd === null) {
        return "highlight part of the selected ayah in the textbox first";
      }
      return {
        ...base,
        selection: {
          ayah_serial_no: state.selectedAyahSerial,
          start_offset: state.selectionStart,
          end_offset: state.selectionEnd,
        },
      };
    }
    const ayah = await this.api.ayah(state.selectedAyahSerial);
    return { ...base, surah_no: ayah.surah_serial_no };
  }

  async refresh(): Promise<void> {
    const request = await this.buildRequest();
    if (typeof request === "string") {
      clear(this.body).append(el("div", { class: "hint" }, [request]));
      return;
    }
    let result: SplitResult | undefined;
    try {
      result = await this.guard(this.api.split(request));
    } catch (error) {
      clear(this.body).append(errorBox((error as Error).message));
      return;
    }
    if (result === undefined) return;
    this.render(result);
  }

  private render(result: SplitResult): void {
    clear(this.body);
    const table = el("table", { class: "split-table" });
    if (result.grouping === "grouped") {
      table.append(el("tr", {}, [el("th", {}, ["Token"]), el("th", {}, ["Count"])]));
      for (const row of result.rows) {
        table.append(
          el("tr", {}, [
            el("td", { dir: "rtl", lang: "ar" }, [row.token]),
            el("td", {}, [String(row.count)]),
          ]),
        );
      }
    } else {
      table.append(el("tr", {}, [el("th", {}, ["Row#"]), el("th", {}, ["Token"])]));
      for (const row of result.rows) {
        table.append(
          el("tr", {}, [
            el("td", {}, [String(row.row_no)]),
            el("td", { dir: "rtl", lang: "ar" }, [row.token]),
          ]),
        );
      }
    }
    this.body.append(table);
  }
}
