import { describe, expect, it } from "vitest";

import { DEFAULT_STATE, hashToState, latestGuard, stateToHash, Store } from "../src/state.js";

describe("url round trip", () => {
  it("serializes and parses the deep-linkable fields", () => {
    const state = {
      ...DEFAULT_STATE,
      pageNo: 31,
      selectedAyahSerial: 207,
      rightTab: "wiki" as const,
      statsGranularity: "word" as const,
      wikiQueryId: "q0001",
    };
    expect(hashToState(stateToHash(state))).toEqual({
      ...state,
      selectionStart: null,
      selectionEnd: null,
    });
  });

  it("falls back to defaults on junk", () => {
    expect(hashToState("#page=zero&tab=bogus")).toEqual(DEFAULT_STATE);
    expect(hashToState("")).toEqual(DEFAULT_STATE);
  });
});

describe("store", () => {
  it("notifies subscribers with immutable snapshots", () => {
    const store = new Store();
    const seen: number[] = [];
    store.subscribe((s) => seen.push(s.pageNo));
    store.update({ pageNo: 2 });
    store.update({ pageNo: 5 });
    expect(seen).toEqual([2, 5]);
    const snapshot = store.get();
    snapshot.pageNo = 99;
    expect(store.get().pageNo).toBe(5);
  });
});

describe("latestGuard", () => {
  it("drops stale responses, delivering only the newest", async () => {
    const guard = latestGuard();
    let releaseFirst!: (v: string) => void;
    const first = guard(new Promise<string>((resolve) => (releaseFirst = resolve)));
    const second = guard(Promise.resolve("second"));
    expect(await second).toBe("second");
    releaseFirst("first");
    expect(await first).toBeUndefined();
  });
});
