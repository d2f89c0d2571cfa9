// App shell: three-pane layout, right-pane tabs, token entry, URL binding.

import { ApiClient } from "./api.js";
import { Dashboard } from "./dashboard.js";
import { clear, el } from "./dom.js";
import { Explorer } from "./explorer.js";
import { SplitterPanel } from "./splitterPanel.js";
import { bindHash, hashToState, Store } from "./state.js";
import { StatsPanel } from "./statsPanel.js";
import { WikiPanel } from "./wikiPanel.js";

const RIGHT_TABS = [
  ["stats", "Stats Manager"],
  ["splitter", "Text Splitter"],
  ["wiki", "QR Wiki"],
  ["dashboard", "Developer"],
] as const;

export interface App {
  store: Store;
  explorer: Explorer;
  stats: StatsPanel;
  splitter: SplitterPanel;
  wiki: WikiPanel;
  dashboard: Dashboard;
  ready: Promise<void>;
}

export function mountApp(root: HTMLElement, api: ApiClient, win: Window = window): App {
  const store = new Store(hashToState(win.location.hash));
  bindHash(store, win);

  const explorer = new Explorer(api, store);
  const navigateAyah = (serial: number) => void explorer.showAyah(serial);
  const stats = new StatsPanel(api, store);
  const splitter = new SplitterPanel(api, store);
  const wiki = new WikiPanel(api, store, navigateAyah);
  const dashboard = new Dashboard(api, navigateAyah);

  const tokenInput = el("input", {
    class: "token-input",
    type: "password",
    placeholder: "developer/admin token (optional)",
  });
  tokenInput.addEventListener("change", () => {
    api.token = tokenInput.value.trim() || null;
    void dashboard.refreshList();
  });
  const header = el("header", { class: "app-header" }, [
    el("h1", {}, ["Quran Corpus Explorer"]),
    tokenInput,
  ]);

  const tabBar = el("div", { class: "right-tabs" });
  const panelBodies: Record<string, HTMLElement> = {
    stats: stats.root,
    splitter: splitter.root,
    wiki: wiki.root,
    dashboard: dashboard.root,
  };
  const rightBody = el("div", { class: "right-body" });
  for (const [key, label] of RIGHT_TABS) {
    const button = el("button", { type: "button", class: "right-tab", "data-tab": key }, [label]);
    button.addEventListener("click", () => store.update({ rightTab: key }));
    tabBar.append(button);
  }
  const rightPane = el("div", { class: "pane right-pane" }, [tabBar, rightBody]);

  store.subscribe((state) => {
    for (const button of tabBar.querySelectorAll("button")) {
      button.classList.toggle("active", button.getAttribute("data-tab") === state.rightTab);
    }
    const active = panelBodies[state.rightTab];
    if (rightBody.firstChild !== active) {
      clear(rightBody).append(active);
    }
  });

  clear(root).append(
    header,
    el("main", { class: "three-pane" }, [explorer.navPane, explorer.mushafPane, rightPane]),
  );

  const ready = explorer.start().then(() => {
    store.update({}); // re-broadcast so panels render against the loaded corpus
  });
  return { store, explorer, stats, splitter, wiki, dashboard, ready };
}

declare global {
  interface Window {
    __mushafTestMode?: boolean;
  }
}

if (typeof document !== "undefined" && !window.__mushafTestMode) {
  const root = document.getElementById("app");
  if (root) {
    mountApp(root, new ApiClient(""));
  }
}
