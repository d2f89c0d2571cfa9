// Result grid rendering with hyperlink cells. Subquery cells load the detail
// grid beneath the main grid; AyahSerialNo cells navigate the mushaf pane.

import type { CellLink, Grid } from "./api.js";
import { el } from "./dom.js";

export interface GridCallbacks {
  onSubquery?: (link: CellLink, row: unknown[]) => void;
  onNavigateAyah?: (ayahSerial: number) => void;
}

function cellText(value: unknown): string {
  return value === null || value === undefined ? "" : String(value);
}

export function renderGrid(grid: Grid, callbacks: GridCallbacks = {}, cssClass = "result-grid"): HTMLElement {
  const linksByCell = new Map<string, CellLink>();
  for (const link of grid.links) {
    linksByCell.set(`${link.row}:${link.column}`, link);
  }

  const header = el("tr", {}, grid.columns.map((name) => el("th", {}, [name])));
  const body = grid.rows.map((row, rowIdx) =>
    el(
      "tr",
      {},
      row.map((value, colIdx) => {
        const link = linksByCell.get(`${rowIdx}:${colIdx}`);
        if (!link) return el("td", {}, [cellText(value)]);
        const anchor = el(
          "a",
          { href: "#", class: "cell-link", "data-kind": link.kind, "data-hyperlink": String(link.hyperlink_id) },
          [cellText(value)],
        );
        anchor.addEventListener("click", (event) => {
          event.preventDefault();
          if (link.kind === "Subquery") {
            callbacks.onSubquery?.(link, row);
          } else {
            callbacks.onNavigateAyah?.(Number(link.value));
          }
        });
        return el("td", {}, [anchor]);
      }),
    ),
  );

  const table = el("table", { class: cssClass, dir: "rtl" }, [header, ...body]);
  const wrapper = el("div", { class: `${cssClass}-wrapper` }, [table]);
  if (grid.truncated) {
    wrapper.append(el("div", { class: "truncated-note" }, ["result truncated at the row limit"]));
  }
  wrapper.append(
    el("div", { class: "execution-time" }, [`${grid.execution_ms.toFixed(1)} ms`]),
  );
  return wrapper;
}

/** Main grid plus a slot the detail grid renders into when a cell is clicked. */
export function renderGridWithDetail(
  grid: Grid,
  loadDetail: (link: CellLink, row: unknown[]) => Promise<Grid>,
  onNavigateAyah?: (ayahSerial: number) => void,
): HTMLElement {
  const container = el("div", { class: "grid-with-detail" });
  const detailSlot = el("div", { class: "detail-slot" });
  const main = renderGrid(
    grid,
    {
      onNavigateAyah,
      onSubquery: (link, row) => {
        detailSlot.textContent = "loading detail...";
        loadDetail(link, row)
          .then((detail) => {
            detailSlot.textContent = "";
            detailSlot.append(renderGrid(detail, { onNavigateAyah }, "detail-grid"));
          })
          .catch((error: Error) => {
            detailSlot.textContent = "";
            detailSlot.append(el("div", { class: "error-box" }, [error.message]));
          });
      },
    },
    "main-grid",
  );
  container.append(main, detailSlot);
  return container;
}
