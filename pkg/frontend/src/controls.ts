/**
 * Slider and selector specifications realizing the normalized full-scale
 * contract: the left extreme of every filter slider hides nothing, the
 * right extreme hides everything (for the quality filter, everything
 * except cells at exactly the worst normalized value, so inverted and
 * degenerate cells stay inspectable).
 */

import { SceneMeta } from "./protocol.js";
import {
  IRREGULAR_MODES,
  IrregularMode,
  QUALITY_COMPLETE_THRESHOLD,
  QUALITY_NULL_THRESHOLD,
  Status,
  Vec3,
} from "./status.js";

export interface StatusPatch {
  [key: string]: unknown;
}

/** Projected extents of the mesh bounding box along a direction. */
export function projectedRange(bounds: [number[], number[]], normal: Vec3): [number, number] {
  const [lo, hi] = bounds;
  let min = Infinity;
  let max = -Infinity;
  for (const x of [lo[0], hi[0]]) {
    for (const y of [lo[1], hi[1]]) {
      for (const z of [lo[2], hi[2]]) {
        const p = x * normal[0] + y * normal[1] + z * normal[2];
        min = Math.min(min, p);
        max = Math.max(max, p);
      }
    }
  }
  return [min, max];
}

/** Plane-offset slider: 0 hides nothing, 1 hides everything. */
export function planeOffsetFromSlider(meta: SceneMeta, normal: Vec3, t: number): number {
  const [min, max] = projectedRange(meta.bounds, normal);
  return min + t * (max - min);
}

export function planeSliderFromOffset(meta: SceneMeta, normal: Vec3, offset: number): number {
  const [min, max] = projectedRange(meta.bounds, normal);
  if (max - min <= 0) return 0;
  return Math.min(1, Math.max(0, (offset - min) / (max - min)));
}

/** Peel slider over [0, max depth + 1] in discrete steps. */
export function peelDepthFromSlider(maxDepth: number, t: number): number {
  return Math.round(t * (maxDepth + 1));
}

/** Quality slider: left end hides nothing, right end leaves only the
 * worst (normalized 0) cells visible. */
export function qualityThresholdFromSlider(t: number): number {
  const value = (1 - t) * QUALITY_NULL_THRESHOLD;
  return Math.max(value, QUALITY_COMPLETE_THRESHOLD);
}

/** Discrete irregular-mode slider: leftmost disables, rightmost is the
 * most informative mode. */
export function irregularModeFromStep(step: number): IrregularMode {
  const clamped = Math.min(IRREGULAR_MODES.length - 1, Math.max(0, Math.round(step)));
  return IRREGULAR_MODES[clamped];
}

export const IRREGULAR_STEPS = IRREGULAR_MODES.length;

export interface SliderSpec {
  id: string;
  label: string;
  /** discrete step count, or null for continuous sliders */
  steps: number | null;
  apply(status: Status, meta: SceneMeta | null, t: number): StatusPatch;
}

/** The slider set; each slider maps to exactly one status field. */
export const SLIDERS: SliderSpec[] = [
  {
    id: "plane",
    label: "slicing plane offset",
    steps: null,
    apply: (status, meta, t) => ({
      plane_offset: meta
        ? planeOffsetFromSlider(meta, status.plane_normal, t)
        : status.plane_offset,
      plane_enabled: true,
    }),
  },
  {
    id: "peel",
    label: "peel depth",
    steps: null,
    apply: (_status, meta, t) => ({
      peel_min_depth: peelDepthFromSlider(meta ? meta.max_peel_depth : 0, t),
    }),
  },
  {
    id: "quality",
    label: "quality threshold",
    steps: null,
    apply: (_status, _meta, t) => ({
      quality_threshold: qualityThresholdFromSlider(t),
      quality_threshold_raw: null,
    }),
  },
  {
    id: "mode_param",
    label: "mode parameter",
    steps: null,
    apply: (status, _meta, t) => ({
      mode_param: status.mode === "flat" ? 0.05 + 0.95 * t : 0.02 + 0.44 * t,
    }),
  },
  {
    id: "silhouette",
    label: "silhouette",
    steps: null,
    apply: (_status, _meta, t) => ({ silhouette_alpha: t }),
  },
  {
    id: "regularization",
    label: "regularization strength",
    steps: 6,
    apply: (_status, _meta, t) => ({ regularization: Math.round(t * 5) }),
  },
  {
    id: "irregular",
    label: "irregular structure",
    steps: IRREGULAR_STEPS,
    apply: (_status, _meta, t) => ({
      irregular_mode: irregularModeFromStep(t * (IRREGULAR_STEPS - 1)),
    }),
  },
];

/** Apply a slider move; returns the names of the fields it changed. */
export function applySlider(
  status: Status,
  meta: SceneMeta | null,
  id: string,
  t: number,
): (keyof Status)[] {
  const spec = SLIDERS.find((s) => s.id === id);
  if (!spec) throw new Error(`unknown slider ${id}`);
  const patch = spec.apply(status, meta, Math.min(1, Math.max(0, t)));
  const changed: (keyof Status)[] = [];
  for (const [key, value] of Object.entries(patch)) {
    const k = key as keyof Status;
    (status as unknown as Record<string, unknown>)[k] = value;
    changed.push(k);
  }
  return changed;
}
