// Central view state with URL (hash) round-tripping and stale-response guards.

export type RightTab = "stats" | "splitter" | "wiki" | "dashboard";
export type Granularity = "surah" | "ayah" | "word" | "selection";

export interface ViewState {
  pageNo: number;
  selectedAyahSerial: number | null;
  selectionStart: number | null;
  selectionEnd: number | null;
  rightTab: RightTab;
  statsGranularity: Granularity;
  wikiQueryId: string | null;
}

export const DEFAULT_STATE: ViewState = {
  pageNo: 1,
  selectedAyahSerial: null,
  selectionStart: null,
  selectionEnd: null,
  rightTab: "stats",
  statsGranularity: "surah",
  wikiQueryId: null,
};

type Listener = (state: ViewState) => void;

export class Store {
  private state: ViewState;
  private listeners: Listener[] = [];

  constructor(initial: ViewState = DEFAULT_STATE) {
    this.state = { ...initial };
  }

  get(): ViewState {
    return { ...this.state };
  }

  update(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) {
      listener(this.get());
    }
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }
}

/** Serialize the deep-linkable parts of the state into a URL hash. */
export function stateToHash(state: ViewState): string {
  const params = new URLSearchParams();
  params.set("page", String(state.pageNo));
  if (state.selectedAyahSerial !== null) params.set("ayah", String(state.selectedAyahSerial));
  if (state.rightTab !== "stats") params.set("tab", state.rightTab);
  if (state.statsGranularity !== "surah") params.set("g", state.statsGranularity);
  if (state.wikiQueryId !== null) params.set("query", state.wikiQueryId);
  return "#" + params.toString();
}

export function hashToState(hash: string): ViewState {
  const params = new URLSearchParams(hash.replace(/^#/, ""));
  const state: ViewState = { ...DEFAULT_STATE };
  const page = Number(params.get("page"));
  if (Number.isInteger(page) && page >= 1) state.pageNo = page;
  const ayah = Number(params.get("ayah"));
  if (Number.isInteger(ayah) && ayah >= 1) state.selectedAyahSerial = ayah;
  const tab = params.get("tab");
  if (tab === "splitter" || tab === "wiki" || tab === "dashboard") state.rightTab = tab;
  const granularity = params.get("g");
  if (granularity === "ayah" || granularity === "word" || granularity === "selection") {
    state.statsGranularity = granularity;
  }
  state.wikiQueryId = params.get("query");
  return state;
}

/** Keep location.hash and the store in sync (both directions). */
export function bindHash(store: Store, win: Window = window): void {
  let applying = false;
  store.subscribe((state) => {
    if (applying) return;
    const next = stateToHash(state);
    if (win.location.hash !== next) {
      win.history.replaceState(null, "", next);
    }
  });
  win.addEventListener("hashchange", () => {
    applying = true;
    try {
      store.update(hashToState(win.location.hash));
    } finally {
      applying = false;
    }
  });
}

/**
 * Stale-response guard: each call gets a sequence token; only the latest
 * call's result is delivered, earlier in-flight responses resolve undefined.
 */
export function latestGuard(): <T>(work: Promise<T>) => Promise<T | undefined> {
  let sequence = 0;
  return async function run<T>(work: Promise<T>): Promise<T | undefined> {
    const mine = ++sequence;
    const result = await work;
    return mine === sequence ? result : undefined;
  };
}
