import { SearchClient } from "./api";
import { renderResults } from "./render";
import {
  addFilter,
  defaultState,
  fromShareHash,
  removeFilter,
  toShareHash,
  UIQueryState,
} from "./state";
import { MODALITIES, NodeInfo } from "./types";

const client = new SearchClient("");
let state: UIQueryState = window.location.hash
  ? fromShareHash(window.location.hash)
  : defaultState();

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

function renderChips(): void {
  const box = $("filter-chips");
  box.innerHTML = "";
  for (const chip of state.filters) {
    const el = document.createElement("span");
    el.className = "chip";
    el.textContent = `${chip.field}:${chip.value} ✕`;
    el.addEventListener("click", () => {
      state = removeFilter(state, chip);
      renderChips();
      void runSearch();
    });
    box.appendChild(el);
  }
}

function renderTabs(): void {
  const tabs = $("modality-tabs");
  tabs.innerHTML = "";
  for (const modality of MODALITIES) {
    const tab = document.createElement("button");
    tab.className = modality === state.modality ? "tab active" : "tab";
    tab.textContent = modality;
    tab.addEventListener("click", () => {
      state = { ...state, modality };
      renderTabs();
      void runSearch();
    });
    tabs.appendChild(tab);
  }
}

async function runSearch(): Promise<void> {
  window.location.hash = toShareHash(state);
  const results = $("results");
  if (!state.text && !state.exemplar) {
    results.innerHTML = "";
    return;
  }
  try {
    const response = await client.search(state);
    renderResults(results, response, {
      mediaUrl: (id) => client.mediaUrl(id),
      queryText: state.text,
      onSelect: (item) => {
        // attach the clicked result as exemplar for composed refinement
        state = {
          ...state,
          exemplar: { kind: "image", data: String(item.media_id) },
        };
      },
    });
  } catch (err) {
    if ((err as Error).name === "AbortError") return; // superseded query
    results.innerHTML = "";
    const msg = document.createElement("div");
    msg.className = "error";
    msg.textContent = String(err);
    results.appendChild(msg);
  }
}

function renderShardStatus(info: NodeInfo): void {
  const box = $("shard-status");
  box.innerHTML = "";
  for (const shard of info.shards ?? []) {
    const el = document.createElement("span");
    el.className = `shard ${shard.status}`;
    el.textContent = `${shard.shard_id}: ${shard.status}`;
    box.appendChild(el);
  }
}

export function boot(): void {
  renderTabs();
  renderChips();

  const input = $("query-input") as HTMLInputElement;
  input.value = state.text;
  input.addEventListener("keydown", (event) => {
    if (event.key !== "Enter") return;
    const match = input.value.match(/(\w+):(\S+)\s*$/);
    if (match && event.shiftKey) {
      // shift-enter turns a trailing field:value into a chip
      state = addFilter(state, match[1], match[2]);
      input.value = input.value.slice(0, match.index).trim();
      renderChips();
    }
    state = { ...state, text: input.value };
    void runSearch();
  });

  const alpha = $("alpha-slider") as HTMLInputElement;
  alpha.value = String(state.alpha);
  alpha.addEventListener("change", () => {
    state = { ...state, alpha: Number(alpha.value) };
    if (state.exemplar) void runSearch();
  });

  const poll = async (): Promise<void> => {
    try {
      renderShardStatus(await client.info());
    } catch {
      /* node unreachable; leave the last status visible */
    }
  };
  void poll();
  setInterval(poll, 10_000);

  if (state.text) void runSearch();
}

if (typeof document !== "undefined" && document.getElementById("results")) {
  boot();
}
