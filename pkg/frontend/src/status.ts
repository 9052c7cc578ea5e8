/**
 * The status snapshot document: the complete visualization state shared
 * with the kernel (see docs/status-schema.md in the repository root).
 *
 * serializeStatus produces the canonical text form byte-for-byte equal
 * to the kernel's, so statuses can be copy-pasted between the viewer,
 * the CLI and PNG metadata without drift.  parseStatus is tolerant:
 * unknown keys warn, missing keys take defaults.
 */

import { pyFloatRepr, pyJsonString } from "./pyrepr.js";

export type Vec3 = [number, number, number];
export type Vec4 = [number, number, number, number];

export const SCHEMA_VERSION = 1;
export const STATUS_KEYWORD = "hexalab-status";

export const METRIC_IDS = [
  "DIA", "DIS", "ER", "J", "MER", "MAAF", "MEAF", "ODD", "RSS",
  "SJ", "SHA", "SHAS", "SHE", "SHES", "SKE", "STR", "TAP", "VOL",
] as const;
export const COLORMAPS = ["none", "parula", "jet", "redblue"] as const;
export const MODES = ["flat", "fissure", "rounded"] as const;
export const IRREGULAR_MODES = ["off", "wire", "barbed", "paper"] as const;
export const LIGHTING = ["ao", "direct"] as const;

export type MetricId = (typeof METRIC_IDS)[number];
export type Colormap = (typeof COLORMAPS)[number];
export type Mode = (typeof MODES)[number];
export type IrregularMode = (typeof IRREGULAR_MODES)[number];
export type Lighting = (typeof LIGHTING)[number];

// smallest normalized threshold that hides nothing / almost everything
export const QUALITY_NULL_THRESHOLD = 1.0000000000000002;
export const QUALITY_COMPLETE_THRESHOLD = 5e-324;

export interface Status {
  version: number;
  mesh: string;
  camera_direction: Vec3;
  camera_up: Vec3;
  camera_distance: number;
  camera_target: Vec3;
  plane_normal: Vec3;
  plane_offset: number;
  plane_enabled: boolean;
  peel_min_depth: number;
  quality_threshold: number;
  quality_threshold_raw: number | null;
  metric: MetricId;
  colormap: Colormap;
  mode: Mode;
  mode_param: number;
  silhouette_alpha: number;
  regularization: number;
  irregular_mode: IrregularMode;
  irregular_xray: boolean;
  dug: number[];
  undug: number[];
  isolated: number | null;
  color_outer: Vec3;
  color_inner: Vec3;
  color_background: Vec4;
  color_valence3: Vec3;
  color_valence5: Vec3;
  color_valence_other: Vec3;
  lighting: Lighting;
  image_size: [number, number];
}

type FieldKind =
  | "int" | "float" | "str" | "bool"
  | "vec3" | "vec4" | "intlist" | "optFloat" | "optInt" | "intPair";

const FIELDS: Array<[keyof Status, FieldKind]> = [
  ["version", "int"],
  ["mesh", "str"],
  ["camera_direction", "vec3"],
  ["camera_up", "vec3"],
  ["camera_distance", "float"],
  ["camera_target", "vec3"],
  ["plane_normal", "vec3"],
  ["plane_offset", "float"],
  ["plane_enabled", "bool"],
  ["peel_min_depth", "int"],
  ["quality_threshold", "float"],
  ["quality_threshold_raw", "optFloat"],
  ["metric", "str"],
  ["colormap", "str"],
  ["mode", "str"],
  ["mode_param", "float"],
  ["silhouette_alpha", "float"],
  ["regularization", "int"],
  ["irregular_mode", "str"],
  ["irregular_xray", "bool"],
  ["dug", "intlist"],
  ["undug", "intlist"],
  ["isolated", "optInt"],
  ["color_outer", "vec3"],
  ["color_inner", "vec3"],
  ["color_background", "vec4"],
  ["color_valence3", "vec3"],
  ["color_valence5", "vec3"],
  ["color_valence_other", "vec3"],
  ["lighting", "str"],
  ["image_size", "intPair"],
];

export function defaultStatus(): Status {
  return {
    version: SCHEMA_VERSION,
    mesh: "",
    camera_direction: [-0.45, -0.35, -1.0],
    camera_up: [0.0, 1.0, 0.0],
    camera_distance: 0.0,
    camera_target: [0.0, 0.0, 0.0],
    plane_normal: [1.0, 0.0, 0.0],
    plane_offset: 0.0,
    plane_enabled: false,
    peel_min_depth: 0,
    quality_threshold: QUALITY_NULL_THRESHOLD,
    quality_threshold_raw: null,
    metric: "SJ",
    colormap: "none",
    mode: "flat",
    mode_param: 0.35,
    silhouette_alpha: 1.0,
    regularization: 0,
    irregular_mode: "off",
    irregular_xray: false,
    dug: [],
    undug: [],
    isolated: null,
    color_outer: [1.0, 1.0, 1.0],
    color_inner: [1.0, 0.85, 0.25],
    color_background: [1.0, 1.0, 1.0, 1.0],
    color_valence3: [0.85, 0.1, 0.1],
    color_valence5: [0.1, 0.65, 0.15],
    color_valence_other: [0.15, 0.25, 0.85],
    lighting: "ao",
    image_size: [640, 480],
  };
}

export function cloneStatus(status: Status): Status {
  return JSON.parse(JSON.stringify(status)) as Status;
}

function encodeValue(kind: FieldKind, value: unknown): string {
  switch (kind) {
    case "int":
      return String(value);
    case "float":
      return pyFloatRepr(value as number);
    case "str":
      return pyJsonString(value as string);
    case "bool":
      return value ? "true" : "false";
    case "vec3":
    case "vec4":
      return `[${(value as number[]).map(pyFloatRepr).join(", ")}]`;
    case "intlist":
    case "intPair": {
      const items = value as number[];
      return items.length ? `[${items.map((v) => String(v)).join(", ")}]` : "[]";
    }
    case "optFloat":
      return value === null ? "null" : pyFloatRepr(value as number);
    case "optInt":
      return value === null ? "null" : String(value);
  }
}

/** Canonical text form, byte-identical to the kernel's serializer. */
export function serializeStatus(status: Status): string {
  validateStatus(status);
  const lines = ["{"];
  FIELDS.forEach(([name, kind], i) => {
    const tail = i < FIELDS.length - 1 ? "," : "";
    lines.push(`  "${name}": ${encodeValue(kind, status[name])}${tail}`);
  });
  lines.push("}");
  return lines.join("\n") + "\n";
}

export class StatusError extends Error {}

function asEnum<T extends readonly string[]>(
  name: string, value: unknown, allowed: T
): T[number] {
  if (typeof value !== "string" || !allowed.includes(value)) {
    throw new StatusError(`unknown ${name} ${JSON.stringify(value)}`);
  }
  return value as T[number];
}

function asVec(name: string, value: unknown, n: number): number[] {
  if (!Array.isArray(value) || value.length !== n) {
    throw new StatusError(`field ${name} must have ${n} entries`);
  }
  const out = value.map(Number);
  if (out.some((v) => !Number.isFinite(v))) {
    throw new StatusError(`field ${name} must be finite`);
  }
  return out;
}

export function validateStatus(status: Status): void {
  if (status.version !== SCHEMA_VERSION) {
    throw new StatusError(`unsupported status schema version ${status.version}`);
  }
  if (!Number.isInteger(status.peel_min_depth) || status.peel_min_depth < 0) {
    throw new StatusError("peel_min_depth must be a non-negative integer");
  }
  if (status.regularization < 0 || status.regularization > 5) {
    throw new StatusError("regularization must be in [0, 5]");
  }
  asEnum("metric", status.metric, METRIC_IDS);
  asEnum("colormap", status.colormap, COLORMAPS);
  asEnum("mode", status.mode, MODES);
  asEnum("irregular mode", status.irregular_mode, IRREGULAR_MODES);
  asEnum("lighting", status.lighting, LIGHTING);
  if (status.silhouette_alpha < 0 || status.silhouette_alpha > 1) {
    throw new StatusError("silhouette_alpha must be in [0, 1]");
  }
  if (status.quality_threshold < 0 || status.quality_threshold > QUALITY_NULL_THRESHOLD) {
    throw new StatusError("quality_threshold out of range");
  }
  for (const [name, kind] of FIELDS) {
    if (kind === "vec3") asVec(name, status[name], 3);
    if (kind === "vec4") asVec(name, status[name], 4);
    if (kind === "float" && !Number.isFinite(status[name] as number)) {
      throw new StatusError(`field ${name} must be finite`);
    }
  }
  if (
    status.image_size.length !== 2 ||
    status.image_size.some((v) => !Number.isInteger(v) || v < 1)
  ) {
    throw new StatusError("image_size must be two positive integers");
  }
  if (status.isolated !== null && (!Number.isInteger(status.isolated) || status.isolated < 0)) {
    throw new StatusError("isolated must be a cell id or null");
  }
  if ([...status.dug, ...status.undug].some((v) => !Number.isInteger(v) || v < 0)) {
    throw new StatusError("dug/undug entries must be cell ids");
  }
}

export interface ParseResult {
  status: Status;
  warnings: string[];
}

/** Tolerant parse: unknown keys warn, missing keys take defaults. */
export function parseStatus(text: string): ParseResult {
  let data: unknown;
  try {
    data = JSON.parse(text);
  } catch (err) {
    throw new StatusError(`malformed status JSON: ${(err as Error).message}`);
  }
  if (typeof data !== "object" || data === null || Array.isArray(data)) {
    throw new StatusError("status document must be a JSON object");
  }
  const raw = data as Record<string, unknown>;
  const version = raw.version ?? SCHEMA_VERSION;
  if (version !== SCHEMA_VERSION) {
    throw new StatusError(`unsupported status schema version ${JSON.stringify(version)}`);
  }
  const status = defaultStatus();
  const warnings: string[] = [];
  const known = new Map(FIELDS.map(([name, kind]) => [name as string, kind]));
  for (const [key, value] of Object.entries(raw)) {
    const kind = known.get(key);
    if (kind === undefined) {
      warnings.push(`ignoring unknown status key '${key}'`);
      continue;
    }
    (status as unknown as Record<string, unknown>)[key] = coerce(key, kind, value);
  }
  for (const [name] of FIELDS) {
    if (!(name in raw) && name !== "version") {
      warnings.push(`missing status key '${name}'; using default`);
    }
  }
  validateStatus(status);
  return { status, warnings };
}

function coerce(name: string, kind: FieldKind, value: unknown): unknown {
  switch (kind) {
    case "int": {
      const v = Number(value);
      if (!Number.isInteger(v)) throw new StatusError(`field ${name} must be an integer`);
      return v;
    }
    case "float":
      return Number(value);
    case "bool":
      if (typeof value !== "boolean") throw new StatusError(`field ${name} must be a boolean`);
      return value;
    case "str":
      return String(value);
    case "vec3":
      return asVec(name, value, 3) as Vec3;
    case "vec4":
      return asVec(name, value, 4) as Vec4;
    case "intlist":
    case "intPair":
      if (!Array.isArray(value)) throw new StatusError(`field ${name} must be a list`);
      return value.map((v) => {
        const n = Number(v);
        if (!Number.isInteger(n)) throw new StatusError(`field ${name} must hold integers`);
        return n;
      });
    case "optFloat":
      return value === null ? null : Number(value);
    case "optInt": {
      if (value === null) return null;
      const n = Number(value);
      if (!Number.isInteger(n)) throw new StatusError(`field ${name} must be an id or null`);
      return n;
    }
  }
}
