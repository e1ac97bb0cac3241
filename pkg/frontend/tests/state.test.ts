import { describe, expect, it } from "vitest";

import {
  addFilter,
  defaultState,
  fromShareHash,
  removeFilter,
  toRequestBody,
  toSearchParams,
  toShareHash,
} from "../src/state";

describe("query state serialization", () => {
  it("compiles filter chips to structured filters params, not query text", () => {
    let state = { ...defaultState(), text: "dog" };
    state = addFilter(state, "country", "Germany");
    state = addFilter(state, "year", "1944");
    const params = toSearchParams(state);
    expect(params.get("q")).toBe("dog");
    expect(params.getAll("filters")).toEqual(["country:Germany", "year:1944"]);
  });

  it("round-trips through the share hash", () => {
    let state = { ...defaultState(), text: "a train", topk: 5, alpha: 0.3 };
    state = addFilter(state, "country", "Germany");
    state.exemplar = { kind: "text", data: "steam engine" };
    expect(fromShareHash(toShareHash(state))).toEqual(state);
  });

  it("POST body mirrors the /search parameter space", () => {
    let state = { ...defaultState(), text: "in snow", alpha: 0.25 };
    state = addFilter(state, "title", "archive");
    state.exemplar = { kind: "image", data: "7" };
    expect(toRequestBody(state)).toEqual({
      q: "in snow",
      modality: "scene",
      topk: 20,
      alpha: 0.25,
      exemplar: { kind: "image", data: "7" },
      filters: [{ field: "title", value: "archive" }],
    });
  });

  it("chips deduplicate and remove cleanly", () => {
    let state = addFilter(defaultState(), "country", "Germany");
    state = addFilter(state, "country", "Germany");
    expect(state.filters).toHaveLength(1);
    state = removeFilter(state, { field: "country", value: "Germany" });
    expect(state.filters).toHaveLength(0);
  });
});
