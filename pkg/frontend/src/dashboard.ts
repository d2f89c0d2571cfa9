// Developer dashboard: author the title/description/SQL, manage the
// parameter list (add/edit/delete/reorder), the detail query and the
// hyperlink columns, run against the API and submit for publication.

import type { ApiClient, HyperlinkColumn, ParameterSpec, QueryPage } from "./api.js";
import { clear, el, errorBox, option } from "./dom.js";
import { renderGridWithDetail } from "./grid.js";

interface Draft {
  id: string | null;
  title: string;
  description: string;
  main_sql: string;
  detail_sql: string | null;
  parameters: ParameterSpec[];
  hyperlink_columns: HyperlinkColumn[];
}

function emptyDraft(): Draft {
  return {
    id: null,
    title: "",
    description: "",
    main_sql: "",
    detail_sql: null,
    parameters: [],
    hyperlink_columns: [],
  };
}

export class Dashboard {
  readonly root = el("div", { class: "dashboard" });
  private draft: Draft = emptyDraft();
  private listBox = el("div", { class: "dash-list" });
  private formBox = el("div", { class: "dash-form" });
  private reportBox = el("div", { class: "dash-report" });
  private resultBox = el("div", { class: "dash-result" });
  private navigateAyah: (serial: number) => void;

  constructor(
    private api: ApiClient,
    navigateAyah: (serial: number) => void,
  ) {
    this.navigateAyah = navigateAyah;
    this.root.append(this.listBox, this.formBox, this.reportBox, this.resultBox);
    this.renderForm();
  }

  async refreshList(): Promise<void> {
    if (!this.api.token) {
      clear(this.listBox).append(
        el("p", { class: "hint" }, ["paste a developer token above to use the dashboard"]),
      );
      return;
    }
    try {
      const { queries } = await this.api.listQueries();
      clear(this.listBox).append(el("h3", {}, ["My queries"]));
      const list = el("ul", { class: "dash-queries" });
      for (const query of queries) {
        const link = el("a", { href: "#", "data-query": query.id }, [
          `${query.id} · ${query.title} [${query.state}]`,
        ]);
        link.addEventListener("click", (event) => {
          event.preventDefault();
          void this.load(query.id);
        });
        list.append(el("li", {}, [link]));
      }
      const fresh = el("button", { type: "button", class: "dash-new" }, ["New query"]);
      fresh.addEventListener("click", () => {
        this.draft = emptyDraft();
        this.renderForm();
      });
      this.listBox.append(list, fresh);
    } catch (error) {
      clear(this.listBox).append(errorBox((error as Error).message));
    }
  }

  private async load(id: string): Promise<void> {
    const page: QueryPage = await this.api.devGet(id);
    this.draft = {
      id: page.id,
      title: page.title,
      description: page.description,
      main_sql: page.main_sql,
      detail_sql: page.detail_sql,
      parameters: page.parameters,
      hyperlink_columns: page.hyperlink_columns,
    };
    this.renderForm();
  }

  private draftBody(): object {
    return {
      title: this.draft.title,
      description: this.draft.description,
      main_sql: this.draft.main_sql,
      detail_sql: this.draft.detail_sql,
      parameters: this.draft.parameters,
      hyperlink_columns: this.draft.hyperlink_columns,
    };
  }

  private async save(): Promise<string> {
    const saved = this.draft.id
      ? await this.api.devUpdate(this.draft.id, this.draftBody())
      : await this.api.devCreate(this.draftBody());
    this.draft.id = saved.id;
    return saved.id;
  }

  private renderForm(): void {
    clear(this.formBox);
    const titleInput = el("input", { class: "dash-title", type: "text", value: this.draft.title });
    titleInput.addEventListener("input", () => (this.draft.title = titleInput.value));
    const descInput = el("textarea", { class: "dash-description" });
    descInput.value = this.draft.description;
    descInput.addEventListener("input", () => (this.draft.description = descInput.value));
    const mainSql = el("textarea", { class: "dash-main-sql", spellcheck: "false" });
    mainSql.value = this.draft.main_sql;
    mainSql.addEventListener("input", () => (this.draft.main_sql = mainSql.value));
    const detailSql = el("textarea", { class: "dash-detail-sql", spellcheck: "false" });
    detailSql.value = this.draft.detail_sql ?? "";
    detailSql.addEventListener("input", () => {
      this.draft.detail_sql = detailSql.value.trim() === "" ? null : detailSql.value;
    });

    const docInput = el("input", { class: "dash-doc", type: "file" });
    docInput.addEventListener("change", () => {
      const file = docInput.files?.[0];
      if (!file || !this.draft.id) return;
      void file.arrayBuffer().then((buffer) => {
        const bytes = new Uint8Array(buffer);
        let binary = "";
        for (const b of bytes) binary += String.fromCharCode(b);
        return this.api.devUploadDocumentation(this.draft.id!, file.name, btoa(binary));
      });
    });

    const actions = el("div", { class: "dash-actions" });
    const buttons: [string, () => Promise<void>][] = [
      ["Save", async () => void (await this.save())],
      ["Validate", () => this.validate()],
      ["Run", () => this.run()],
      ["Submit for publication", () => this.submit()],
    ];
    for (const [label, handler] of buttons) {
      const button = el("button", { type: "button", class: `dash-${label.split(" ")[0].toLowerCase()}` }, [label]);
      button.addEventListener("click", () => {
        handler().catch((error: Error) => {
          clear(this.reportBox).append(errorBox(error.message));
        });
      });
      actions.append(button);
    }

    this.formBox.append(
      el("h3", {}, [this.draft.id ? `Edit ${this.draft.id}` : "New query"]),
      el("label", {}, ["Title"]), titleInput,
      el("label", {}, ["Description"]), descInput,
      el("label", {}, ["Documentation (file)"]), docInput,
      el("label", {}, ["Main query (SQL)"]), mainSql,
      this.renderParameterEditor(),
      el("label", {}, ["Detail query (SQL, optional)"]), detailSql,
      this.renderHyperlinkEditor(),
      actions,
    );
  }

  private renderParameterEditor(): HTMLElement {
    const box = el("fieldset", { class: "param-editor" }, [el("legend", {}, ["Parameters"])]);
    const table = el("table", { class: "param-table" }, [
      el("tr", {}, [
        el("th", {}, ["#"]), el("th", {}, ["Display Name"]), el("th", {}, ["Parameter"]),
        el("th", {}, ["Input"]), el("th", {}, ["Type"]), el("th", {}, ["Default"]), el("th", {}, [""]),
      ]),
    ]);
    this.draft.parameters
      .sort((a, b) => a.sequence_no - b.sequence_no)
      .forEach((param, index) => {
        const up = el("button", { type: "button", class: "param-up" }, ["Up"]);
        const down = el("button", { type: "button", class: "param-down" }, ["Down"]);
        const remove = el("button", { type: "button", class: "param-delete" }, ["Delete"]);
        up.addEventListener("click", () => this.moveParameter(index, -1));
        down.addEventListener("click", () => this.moveParameter(index, +1));
        remove.addEventListener("click", () => {
          this.draft.parameters.splice(index, 1);
          this.resequence();
          this.renderForm();
        });
        table.append(
          el("tr", { class: "param-row" }, [
            el("td", {}, [String(param.sequence_no)]),
            el("td", {}, [param.display_name]),
            el("td", {}, [param.name]),
            el("td", {}, [param.input_method]),
            el("td", {}, [param.data_type]),
            el("td", {}, [param.default_value]),
            el("td", {}, [up, down, remove]),
          ]),
        );
      });

    const nameInput = el("input", { type: "text", placeholder: "@SurahNo", class: "new-param-name" });
    const displayInput = el("input", { type: "text", placeholder: "Surah Name", class: "new-param-display" });
    const methodSelect = el("select", { class: "new-param-method" });
    methodSelect.append(option("TextBox", "Text Box"), option("Dropdown", "Dropdown"));
    const typeSelect = el("select", { class: "new-param-type" });
    typeSelect.append(option("Alphanumeric", "Alphanumeric"), option("Integer", "Integer"));
    const defaultInput = el("input", { type: "text", placeholder: "default", class: "new-param-default" });
    const add = el("button", { type: "button", class: "param-add" }, ["Add Parameter"]);
    add.addEventListener("click", () => {
      this.draft.parameters.push({
        sequence_no: this.draft.parameters.length + 1,
        display_name: displayInput.value,
        name: nameInput.value,
        input_method: methodSelect.value as "TextBox" | "Dropdown",
        data_type: typeSelect.value as "Alphanumeric" | "Integer",
        default_value: defaultInput.value,
        dropdown_source: methodSelect.value === "Dropdown" ? "surahs_with_all" : null,
      });
      this.renderForm();
    });
    box.append(table, displayInput, nameInput, methodSelect, typeSelect, defaultInput, add);
    return box;
  }

  private moveParameter(index: number, delta: number): void {
    const target = index + delta;
    if (target < 0 || target >= this.draft.parameters.length) return;
    const params = this.draft.parameters;
    [params[index], params[target]] = [params[target], params[index]];
    this.resequence();
    this.renderForm();
  }

  private resequence(): void {
    this.draft.parameters.forEach((param, i) => (param.sequence_no = i + 1));
  }

  private renderHyperlinkEditor(): HTMLElement {
    const box = el("fieldset", { class: "hyperlink-editor" }, [el("legend", {}, ["Hyperlink columns"])]);
    const table = el("table", { class: "hyperlink-table" }, [
      el("tr", {}, [
        el("th", {}, ["Id"]), el("th", {}, ["Hyperlink Type"]), el("th", {}, ["Backing Column"]),
        el("th", {}, ["Targeted Column"]), el("th", {}, [""]),
      ]),
    ]);
    this.draft.hyperlink_columns.forEach((link, index) => {
      const remove = el("button", { type: "button", class: "link-delete" }, ["Delete"]);
      remove.addEventListener("click", () => {
        this.draft.hyperlink_columns.splice(index, 1);
        this.renderForm();
      });
      table.append(
        el("tr", { class: "hyperlink-row" }, [
          el("td", {}, [String(link.hyperlink_id)]),
          el("td", {}, [link.info_type]),
          el("td", {}, [link.backing_column]),
          el("td", {}, [link.targeted_column]),
          el("td", {}, [remove]),
        ]),
      );
    });
    const typeSelect = el("select", { class: "new-link-type" });
    typeSelect.append(option("Subquery", "Subquery"), option("AyahSerialNo", "AyahSerialNo"));
    const backingInput = el("input", { type: "text", placeholder: "backing column", class: "new-link-backing" });
    const targetInput = el("input", { type: "text", placeholder: "targeted column", class: "new-link-target" });
    const add = el("button", { type: "button", class: "link-add" }, ["Add Hyperlink Column"]);
    add.addEventListener("click", () => {
      const nextId = Math.max(0, ...this.draft.hyperlink_columns.map((l) => l.hyperlink_id)) + 1;
      this.draft.hyperlink_columns.push({
        hyperlink_id: nextId,
        info_type: typeSelect.value as "Subquery" | "AyahSerialNo",
        backing_column: backingInput.value,
        targeted_column: targetInput.value,
      });
      this.renderForm();
    });
    box.append(table, typeSelect, backingInput, targetInput, add);
    return box;
  }

  private async validate(): Promise<void> {
    const id = await this.save();
    const report = await this.api.devValidate(id);
    clear(this.reportBox);
    if (report.ok) {
      this.reportBox.append(el("div", { class: "ok-box" }, ["validation passed"]));
      return;
    }
    const list = el("ul", { class: "violations" });
    for (const violation of report.violations) {
      list.append(el("li", { class: "violation" }, [`${violation.code}: ${violation.message}`]));
    }
    this.reportBox.append(list);
  }

  private async run(): Promise<void> {
    const id = await this.save();
    // run exactly as the public page will: validation first, then the grid
    const report = await this.api.devValidate(id);
    if (!report.ok) {
      await this.validate();
      return;
    }
    clear(this.reportBox);
    const values: Record<string, string> = {};
    for (const param of this.draft.parameters) {
      values[param.name.replace(/^@/, "")] = param.default_value;
    }
    const response = await this.api.run(id, values);
    if (!response.grid) {
      clear(this.resultBox).append(el("div", { class: "hint" }, [`queued as job ${response.job_id}`]));
      return;
    }
    clear(this.resultBox).append(
      renderGridWithDetail(
        response.grid,
        async (link, row) => (await this.api.detail(id, values, link.hyperlink_id, row)).grid,
        (serial) => this.navigateAyah(serial),
      ),
    );
  }

  private async submit(): Promise<void> {
    const id = await this.save();
    const submitted = await this.api.devSubmit(id);
    clear(this.reportBox).append(
      el("div", { class: "ok-box" }, [`submitted ${submitted.id}; awaiting an admin decision`]),
    );
    await this.refreshList();
  }
}
