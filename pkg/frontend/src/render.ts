import { drawBboxOverlay } from "./overlay";
import type { SearchResponse, SearchResultItem } from "./types";

export const THUMB_WIDTH = 200;
export const THUMB_HEIGHT = 100;

export interface RenderOptions {
  /** Thumbnail/stream URL for a media id; omitted in tests. */
  mediaUrl?: (mediaId: number) => string;
  /** Known duration per media id, for timeline scaling. */
  durationOf?: (mediaId: number) => number | undefined;
  /** Query text whose terms get emphasized inside snippets. */
  queryText?: string;
  /** Click on a card seeks playback to the segment start. */
  onSelect?: (item: SearchResultItem) => void;
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

/** Wrap every query term occurring in the snippet in <mark>. */
export function emphasizeTerms(snippet: string, queryText: string): string {
  const escaped = escapeHtml(snippet);
  const terms = (queryText.toLowerCase().match(/[a-z0-9]+/g) ?? []).filter(
    (t, i, all) => all.indexOf(t) === i
  );
  if (terms.length === 0) return escaped;
  const pattern = new RegExp(`\\b(${terms.join("|")})\\b`, "gi");
  return escaped.replace(pattern, "<mark>$1</mark>");
}

function renderTimeline(item: SearchResultItem, opts: RenderOptions): HTMLElement {
  const bar = document.createElement("div");
  bar.className = "timeline";
  const t0 = item.t_start ?? 0;
  const t1 = item.t_end ?? t0;
  const duration = opts.durationOf?.(item.media_id) ?? t1;
  const span = document.createElement("span");
  span.className = "segment";
  if (duration > 0) {
    span.style.left = `${(t0 / duration) * 100}%`;
    span.style.width = `${(Math.max(t1 - t0, 0) / duration) * 100}%`;
  }
  span.title = `${t0.toFixed(1)}s – ${t1.toFixed(1)}s`;
  bar.appendChild(span);
  return bar;
}

function renderCard(item: SearchResultItem, opts: RenderOptions): HTMLElement {
  const card = document.createElement("article");
  card.className = "result-card";
  card.dataset.mediaId = String(item.media_id);
  if (item.t_start !== undefined) card.dataset.tStart = String(item.t_start);
  if (item.shard_id !== undefined) card.dataset.shardId = item.shard_id;

  const thumb = document.createElement("div");
  thumb.className = "thumb";
  thumb.style.position = "relative";
  thumb.style.width = `${THUMB_WIDTH}px`;
  thumb.style.height = `${THUMB_HEIGHT}px`;
  if (opts.mediaUrl) {
    const img = document.createElement("img");
    img.src = opts.mediaUrl(item.media_id);
    img.width = THUMB_WIDTH;
    img.height = THUMB_HEIGHT;
    thumb.appendChild(img);
  }
  if (item.bbox) {
    drawBboxOverlay(thumb, item.bbox, THUMB_WIDTH, THUMB_HEIGHT);
  }
  card.appendChild(thumb);

  if (item.t_start !== undefined) {
    card.appendChild(renderTimeline(item, opts));
  }
  if (item.snippet !== undefined) {
    const snippet = document.createElement("div");
    snippet.className = "snippet";
    snippet.innerHTML = emphasizeTerms(item.snippet, opts.queryText ?? "");
    card.appendChild(snippet);
  }

  const score = document.createElement("div");
  score.className = "score";
  score.textContent = item.score.toFixed(3);
  card.appendChild(score);

  if (opts.onSelect) {
    card.addEventListener("click", () => opts.onSelect!(item));
  }
  return card;
}

/**
 * Render a /search response.  Results appear in response order — the UI
 * never reorders or filters what the API returned.
 */
export function renderResults(
  root: HTMLElement,
  response: SearchResponse,
  opts: RenderOptions = {}
): void {
  root.innerHTML = "";

  if (response.degraded) {
    const banner = document.createElement("div");
    banner.className = "degraded-banner";
    const missing = response.failed_shards ?? [];
    banner.textContent =
      missing.length > 0
        ? `Results are incomplete: no response from ${missing.join(", ")}`
        : "Results are incomplete: some shards did not respond";
    root.appendChild(banner);
  }

  if (response.results.length === 0) {
    const empty = document.createElement("div");
    empty.className = "no-matches";
    empty.textContent = "No matches";
    root.appendChild(empty);
    return;
  }

  const grid = document.createElement("div");
  grid.className = "results-grid";
  for (const item of response.results) {
    grid.appendChild(renderCard(item, opts));
  }
  root.appendChild(grid);
}
