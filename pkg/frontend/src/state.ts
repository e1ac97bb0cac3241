import type { Exemplar, FilterChip, Modality } from "./types";

/**
 * Everything the query controls hold, mirroring the /search parameter
 * space exactly — the UI adds no semantics of its own, so any state is
 * reproducible as a CLI or curl invocation.
 */
export interface UIQueryState {
  modality: Modality;
  text: string;
  filters: FilterChip[];
  exemplar: Exemplar | null;
  alpha: number;
  topk: number;
}

export function defaultState(): UIQueryState {
  return {
    modality: "scene",
    text: "",
    filters: [],
    exemplar: null,
    alpha: 0.5,
    topk: 20,
  };
}

export function addFilter(state: UIQueryState, field: string, value: string): UIQueryState {
  const exists = state.filters.some((c) => c.field === field && c.value === value);
  if (exists || !field || !value) return state;
  return { ...state, filters: [...state.filters, { field, value }] };
}

export function removeFilter(state: UIQueryState, chip: FilterChip): UIQueryState {
  return {
    ...state,
    filters: state.filters.filter(
      (c) => !(c.field === chip.field && c.value === chip.value)
    ),
  };
}

/** GET parameters; filter chips compile to structured `filters` entries. */
export function toSearchParams(state: UIQueryState): URLSearchParams {
  const params = new URLSearchParams();
  if (state.text) params.set("q", state.text);
  params.set("modality", state.modality);
  params.set("topk", String(state.topk));
  for (const chip of state.filters) {
    params.append("filters", `${chip.field}:${chip.value}`);
  }
  return params;
}

/** POST body for queries that carry an exemplar (composed search). */
export function toRequestBody(state: UIQueryState): Record<string, unknown> {
  return {
    q: state.text || null,
    modality: state.modality,
    topk: state.topk,
    alpha: state.alpha,
    exemplar: state.exemplar,
    filters: state.filters.map((c) => ({ field: c.field, value: c.value })),
  };
}

/** Shareable URL fragment: the state round-trips through the hash. */
export function toShareHash(state: UIQueryState): string {
  const params = toSearchParams(state);
  if (state.exemplar) params.set("exemplar", JSON.stringify(state.exemplar));
  if (state.alpha !== 0.5) params.set("alpha", String(state.alpha));
  return `#${params.toString()}`;
}

export function fromShareHash(hash: string): UIQueryState {
  const state = defaultState();
  const params = new URLSearchParams(hash.replace(/^#/, ""));
  state.text = params.get("q") ?? "";
  const modality = params.get("modality");
  if (modality) state.modality = modality as Modality;
  const topk = params.get("topk");
  if (topk) state.topk = Number(topk);
  const alpha = params.get("alpha");
  if (alpha) state.alpha = Number(alpha);
  const exemplar = params.get("exemplar");
  if (exemplar) state.exemplar = JSON.parse(exemplar);
  for (const raw of params.getAll("filters")) {
    const idx = raw.indexOf(":");
    if (idx > 0) {
      state.filters.push({ field: raw.slice(0, idx), value: raw.slice(idx + 1) });
    }
  }
  return state;
}
