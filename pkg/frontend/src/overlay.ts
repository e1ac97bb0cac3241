import type { Bbox } from "./types";

export interface PixelRect {
  left: number;
  top: number;
  width: number;
  height: number;
}

/**
 * Scale a normalized [x0, y0, x1, y1] box to pixel coordinates on a
 * rendered thumbnail.  Each corner is rounded independently so the
 * rectangle's edges land within one pixel of the exact positions.
 */
export function scaleBbox(bbox: Bbox, width: number, height: number): PixelRect {
  const [x0, y0, x1, y1] = bbox;
  const left = Math.round(x0 * width);
  const top = Math.round(y0 * height);
  return {
    left,
    top,
    width: Math.round(x1 * width) - left,
    height: Math.round(y1 * height) - top,
  };
}

export function drawBboxOverlay(
  container: HTMLElement,
  bbox: Bbox,
  width: number,
  height: number
): HTMLDivElement {
  const rect = scaleBbox(bbox, width, height);
  const el = document.createElement("div");
  el.className = "bbox-overlay";
  el.style.position = "absolute";
  el.style.left = `${rect.left}px`;
  el.style.top = `${rect.top}px`;
  el.style.width = `${rect.width}px`;
  el.style.height = `${rect.height}px`;
  container.appendChild(el);
  return el;
}
