/**
 * The message-passing boundary between the viewer and the kernel.
 *
 * The kernel owns mesh parsing, connectivity, filtering, extraction,
 * quality, AO and rendering; the viewer only mutates the Status and
 * displays what comes back.  Every request carries a sequence number so
 * stale responses (superseded by a newer Status) can be discarded.
 */

import { parsePly, PlySurface } from "./ply.js";
import { readStoredZip } from "./zip.js";
import { Status } from "./status.js";

export interface MeshInfo {
  name: string;
  vertices: number;
  cells: number;
  edges?: number;
  faces?: number;
  max_peel_depth?: number;
  irregular_edges?: number;
  warnings?: string[];
}

export interface WireframeData {
  segments: number[][][]; // (K, 2, 3)
  opacity: number[];
  colors: number[][];
}

export interface IrregularData {
  mode: string;
  xray: boolean;
  segments: number[][][];
  colors: number[][];
}

export interface SceneMeta {
  mesh: string;
  cells: number;
  vertices: number;
  visible_cells: number;
  bounds: [number[], number[]];
  max_peel_depth: number;
  metric: string;
  q_min: number;
  q_max: number;
  summary: Record<string, unknown>;
  histogram: {
    raw_lo: number[];
    raw_hi: number[];
    counts: number[];
    normalized_mid: number[];
  };
  ao_baked: boolean;
}

export interface SceneData {
  surface: PlySurface | null;
  silhouette: PlySurface | null;
  wireframe: WireframeData;
  irregular: IrregularData;
  meta: SceneMeta;
}

export interface PickHit {
  cell: number;
  face: number;
}

export interface SceneOptions {
  withAo?: boolean;
  aoProbes?: number;
  seed?: number;
}

/** The kernel surface the viewer talks to (HTTP bridge or CLI host). */
export interface Kernel {
  loadMesh(name: string, bytes: Uint8Array): Promise<MeshInfo>;
  scene(status: Status, options?: SceneOptions): Promise<SceneData>;
  render(status: Status, options?: SceneOptions): Promise<Uint8Array>;
  pick(
    status: Status,
    screen: [number, number],
    action: "report" | "dig" | "undig" | "isolate",
  ): Promise<{ hit: PickHit | null; status: Status | null }>;
  planeFromView(status: Status, viewDir: [number, number, number], snap: boolean): Promise<Status>;
}

const decoder = new TextDecoder();

/** Decode the kernel's scene archive (stored zip of PLY/JSON entries). */
export function decodeSceneArchive(bytes: Uint8Array): SceneData {
  const entries = readStoredZip(bytes);
  const text = (name: string) => {
    const raw = entries.get(name);
    if (!raw) throw new Error(`scene archive is missing ${name}`);
    return decoder.decode(raw);
  };
  const maybePly = (name: string): PlySurface | null => {
    const raw = entries.get(name);
    return raw ? parsePly(decoder.decode(raw)) : null;
  };
  return {
    surface: maybePly("surface.ply"),
    silhouette: maybePly("silhouette.ply"),
    wireframe: JSON.parse(text("wireframe.json")) as WireframeData,
    irregular: JSON.parse(text("irregular.json")) as IrregularData,
    meta: JSON.parse(text("meta.json")) as SceneMeta,
  };
}
