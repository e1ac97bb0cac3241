export type Modality =
  | "scene"
  | "object"
  | "face"
  | "audio"
  | "speech"
  | "metadata";

export const MODALITIES: Modality[] = [
  "scene",
  "object",
  "face",
  "audio",
  "speech",
  "metadata",
];

/** Normalized [x0, y0, x1, y1] in the unit square. */
export type Bbox = [number, number, number, number];

export interface SearchResultItem {
  media_id: number;
  score: number;
  t_start?: number;
  t_end?: number;
  support?: number;
  bbox?: Bbox;
  snippet?: string;
  /** Present only on federated responses. */
  shard_id?: string;
}

export interface SearchResponse {
  results: SearchResultItem[];
  degraded: boolean;
  failed_shards?: string[];
  latency_ms: number;
}

export interface Exemplar {
  kind: "text" | "image" | "audio";
  data: string;
}

export interface FilterChip {
  field: string;
  value: string;
}

export interface ShardInfo {
  shard_id: string;
  endpoint: string;
  status: string;
}

export interface NodeInfo {
  shard_id: string;
  role: string;
  extractor: { name: string; version: string; dim: number };
  index_kinds: Record<string, string>;
  counts: Record<string, number>;
  shards?: ShardInfo[];
}
