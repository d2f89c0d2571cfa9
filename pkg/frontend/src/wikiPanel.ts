// QR Wiki tab: topic-tree table of contents, query pages with
// Description | Documentation | Run tabs, parameter forms and result grids.

import type { ApiClient, Grid, ParameterSpec, QueryPage, Topic } from "./api.js";
import { clear, el, errorBox, option } from "./dom.js";
import { renderGridWithDetail } from "./grid.js";
import { Store } from "./state.js";

const JOB_POLL_MS = 250;

export class WikiPanel {
  readonly root = el("div", { class: "wiki-panel" });
  private tocBox = el("div", { class: "wiki-toc" });
  private pageBox = el("div", { class: "wiki-page" });
  private currentQueryId: string | null = null;
  private navigateAyah: (serial: number) => void;

  constructor(
    private api: ApiClient,
    private store: Store,
    navigateAyah: (serial: number) => void,
  ) {
    this.navigateAyah = navigateAyah;
    this.root.append(this.tocBox, this.pageBox);
    store.subscribe(() => void this.refresh());
  }

  async refresh(): Promise<void> {
    const state = this.store.get();
    if (state.rightTab !== "wiki") return;
    if (!this.tocBox.hasChildNodes()) {
      await this.renderToc();
    }
    if (state.wikiQueryId !== this.currentQueryId) {
      this.currentQueryId = state.wikiQueryId;
      if (state.wikiQueryId !== null) {
        await this.renderQueryPage(state.wikiQueryId);
      } else {
        clear(this.pageBox);
      }
    }
  }

  async renderToc(): Promise<void> {
    let toc: Topic;
    try {
      toc = await this.api.toc();
    } catch (error) {
      clear(this.tocBox).append(errorBox((error as Error).message));
      return;
    }
    clear(this.tocBox).append(el("h3", {}, ["Table of Contents"]), this.topicList(toc));
  }

  private topicList(topic: Topic): HTMLElement {
    const list = el("ul", { class: "topic-list" });
    for (const child of topic.children) {
      const item = el("li", { class: "topic" }, [el("span", { class: "topic-name" }, [child.name])]);
      item.append(this.topicList(child));
      list.append(item);
    }
    for (const queryId of topic.query_ids) {
      const link = el("a", { href: "#", class: "toc-query", "data-query": queryId }, [queryId]);
      link.addEventListener("click", (event) => {
        event.preventDefault();
        this.store.update({ wikiQueryId: queryId });
      });
      void this.api
        .queryPage(queryId)
        .then((page) => (link.textContent = page.title))
        .catch(() => undefined);
      list.append(el("li", { class: "topic-leaf" }, [link]));
    }
    return list;
  }

  private async renderQueryPage(queryId: string): Promise<void> {
    let page: QueryPage;
    try {
      page = await this.api.queryPage(queryId);
    } catch (error) {
      clear(this.pageBox).append(errorBox((error as Error).message));
      return;
    }
    clear(this.pageBox);

    const description = el("div", { class: "query-description" }, [
      el("p", {}, [page.description || "(no description)"]),
      el("h4", {}, ["SQL"]),
      el("pre", { class: "query-sql" }, [page.main_sql]),
    ]);
    const documentation = el("div", { class: "query-documentation" });
    if (page.documentation_name) {
      if (page.documentation_name.toLowerCase().endsWith(".pdf")) {
        documentation.append(
          el("iframe", { src: this.api.documentationUrl(queryId), class: "doc-frame" }),
        );
      } else {
        const pre = el("pre", { class: "doc-markdown" }, ["loading..."]);
        documentation.append(pre);
        fetch(this.api.documentationUrl(queryId))
          .then((r) => r.text())
          .then((text) => (pre.textContent = text))
          .catch((error: Error) => (pre.textContent = error.message));
      }
    } else {
      documentation.append(el("p", { class: "hint" }, ["no documentation attached"]));
    }
    const run = this.renderRunTab(page);

    const tabBar = el("div", { class: "query-tabs" });
    const bodies: Record<string, HTMLElement> = {
      Description: description,
      Documentation: documentation,
      Run: run,
    };
    const bodyBox = el("div", { class: "query-tab-body" }, [description]);
    for (const name of Object.keys(bodies)) {
      const button = el("button", { type: "button", class: "query-tab", "data-tab": name }, [name]);
      button.addEventListener("click", () => {
        clear(bodyBox).append(bodies[name]);
      });
      tabBar.append(button);
    }
    this.pageBox.append(el("h3", { class: "query-title" }, [page.title]), tabBar, bodyBox);
  }

  private renderRunTab(page: QueryPage): HTMLElement {
    const form = el("div", { class: "param-form" });
    const inputs = new Map<string, HTMLInputElement | HTMLSelectElement>();
    for (const param of [...page.parameters].sort((a, b) => a.sequence_no - b.sequence_no)) {
      form.append(el("label", {}, [param.display_name]));
      const input = this.parameterInput(param);
      inputs.set(param.name.replace(/^@/, ""), input);
      form.append(input);
    }
    const resultBox = el("div", { class: "run-result" });
    const runButton = el("button", { type: "button", class: "run-query" }, ["Run"]);
    runButton.addEventListener("click", () => {
      const values: Record<string, string> = {};
      for (const [name, input] of inputs) {
        values[name] = input.value;
      }
      void this.execute(page, values, resultBox);
    });
    return el("div", { class: "query-run" }, [form, runButton, resultBox]);
  }

  private parameterInput(param: ParameterSpec): HTMLInputElement | HTMLSelectElement {
    if (param.input_method === "Dropdown" && param.dropdown_source === "surahs_with_all") {
      const select = el("select", { class: "param-input", "data-param": param.name });
      select.append(option("0", "ALL"));
      void this.api.meta().then((meta) => {
        for (const surah of meta.surahs) {
          select.append(option(String(surah.surah_serial_no), surah.name));
        }
        select.value = param.default_value || "0";
      });
      return select;
    }
    return el("input", {
      class: "param-input",
      "data-param": param.name,
      type: param.data_type === "Integer" ? "number" : "text",
      value: param.default_value,
    });
  }

  private async execute(
    page: QueryPage,
    values: Record<string, string>,
    resultBox: HTMLElement,
  ): Promise<void> {
    resultBox.textContent = "running...";
    let grid: Grid;
    try {
      const response = await this.api.run(page.id, values);
      if (response.grid) {
        grid = response.grid;
      } else {
        grid = await this.pollJob(response.job_id, resultBox);
      }
    } catch (error) {
      // keep the form; surface the engine message inline
      clear(resultBox).append(errorBox((error as Error).message));
      return;
    }
    clear(resultBox).append(
      renderGridWithDetail(
        grid,
        async (link, row) => {
          const detail = await this.api.detail(page.id, values, link.hyperlink_id, row);
          return detail.grid;
        },
        (serial) => this.navigateAyah(serial),
      ),
    );
  }

  private async pollJob(jobId: string, resultBox: HTMLElement): Promise<Grid> {
    for (;;) {
      const job = await this.api.job(jobId);
      if (job.state === "Done" && job.result) return job.result;
      if (job.state === "Failed" || job.state === "TimedOut") {
        throw new Error(job.error?.message ?? job.state);
      }
      resultBox.textContent = `job ${jobId}: ${job.state.toLowerCase()}...`;
      await new Promise((resolve) => setTimeout(resolve, JOB_POLL_MS));
    }
  }
}
