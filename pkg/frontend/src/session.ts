/**
 * The viewer session: one loaded mesh, the current Status, and the scene
 * derived from it by the kernel.
 *
 * Every mutation bumps a sequence number and re-requests the scene; a
 * response is applied only if it is still the latest, so slow kernel
 * answers can never clobber newer state.  While ambient occlusion is
 * recomputed the session exposes a direct-lighting scene first and flips
 * `aoState` to complete when the baked result for the latest sequence
 * arrives.
 */

import { Kernel, PickHit, SceneData } from "./protocol.js";
import { extractStatus } from "./png.js";
import {
  cloneStatus,
  defaultStatus,
  parseStatus,
  serializeStatus,
  Status,
} from "./status.js";

export type AoState =
  | { kind: "pending" }
  | { kind: "partial"; probes: number }
  | { kind: "complete" };

export type SessionEvent = "status" | "scene" | "ao" | "mesh" | "error";

export interface SessionOptions {
  aoProbes?: number;
  seed?: number;
  /** skip the direct-lighting preview pass (tests) */
  skipPreview?: boolean;
}

const MESH_EXTENSIONS = [".mesh", ".vtk"];

export class Session {
  readonly kernel: Kernel;
  status: Status;
  meshName: string | null = null;
  scene: SceneData | null = null;
  aoState: AoState = { kind: "complete" };
  aoProbes: number;
  seed: number;
  private seq = 0;
  private appliedSeq = 0;
  private skipPreview: boolean;
  private listeners = new Map<SessionEvent, Set<(s: Session) => void>>();
  private lastRefresh: Promise<void> = Promise.resolve();

  constructor(kernel: Kernel, options: SessionOptions = {}) {
    this.kernel = kernel;
    this.status = defaultStatus();
    this.aoProbes = options.aoProbes ?? 256;
    this.seed = options.seed ?? 0;
    this.skipPreview = options.skipPreview ?? false;
  }

  on(event: SessionEvent, fn: (s: Session) => void): void {
    if (!this.listeners.has(event)) this.listeners.set(event, new Set());
    this.listeners.get(event)!.add(fn);
  }

  private emit(event: SessionEvent): void {
    for (const fn of this.listeners.get(event) ?? []) fn(this);
  }

  get currentSeq(): number {
    return this.seq;
  }

  /** Drop a file onto the session: a mesh loads fresh, a snapshot PNG
   * re-applies its embedded status to the current session. */
  async loadFile(name: string, bytes: Uint8Array): Promise<void> {
    const lowered = name.toLowerCase();
    if (lowered.endsWith(".png")) {
      const status = extractStatus(bytes);
      if (status === null) {
        throw new Error(`${name} carries no status snapshot`);
      }
      this.applyStatus(status);
      return;
    }
    if (!MESH_EXTENSIONS.some((ext) => lowered.endsWith(ext))) {
      throw new Error(`unsupported file type: ${name}`);
    }
    const info = await this.kernel.loadMesh(name, bytes);
    this.meshName = info.name;
    this.status = defaultStatus();
    this.status.mesh = info.name;
    this.emit("mesh");
    this.emit("status");
    await this.refresh();
  }

  /** Fire a refresh without surfacing a rejection to the caller; errors
   * are reported through the "error" event instead. */
  private kick(): void {
    this.lastRefresh = this.refresh().catch(() => undefined);
  }

  /** Resolves when the most recently started refresh has settled. */
  idle(): Promise<void> {
    return this.lastRefresh;
  }

  /** Apply a full status (snapshot drop or clipboard paste). */
  applyStatus(status: Status): void {
    this.status = cloneStatus(status);
    if (this.meshName) this.status.mesh = this.meshName;
    this.emit("status");
    this.kick();
  }

  /** Mutate exactly one status field and re-derive the scene. */
  setField<K extends keyof Status>(name: K, value: Status[K]): void {
    this.status[name] = value;
    this.emit("status");
    this.kick();
  }

  /** Re-request the derived scene for the current status. */
  async refresh(): Promise<void> {
    const mySeq = ++this.seq;
    const wantAo = this.status.lighting === "ao";
    if (wantAo) {
      this.aoState = { kind: "pending" };
      this.emit("ao");
      if (!this.skipPreview) {
        try {
          const preview = await this.kernel.scene(this.status, { withAo: false });
          if (mySeq === this.seq) {
            this.scene = preview;
            this.emit("scene");
          }
        } catch (err) {
          if (mySeq !== this.seq) return; // stale failure: irrelevant
          this.emit("error");
          throw err;
        }
      }
    }
    let result: SceneData;
    try {
      result = await this.kernel.scene(this.status, {
        withAo: wantAo,
        aoProbes: this.aoProbes,
        seed: this.seed,
      });
    } catch (err) {
      if (mySeq !== this.seq) return; // stale failure: irrelevant
      this.emit("error");
      throw err;
    }
    if (mySeq !== this.seq) {
      return; // stale: a newer status superseded this request
    }
    this.appliedSeq = mySeq;
    this.scene = result;
    if (wantAo) {
      this.aoState = { kind: "complete" };
      this.emit("ao");
    }
    this.emit("scene");
  }

  /** Progressive AO notification from kernels that stream probe batches. */
  noteAoProgress(probes: number, seq: number): void {
    if (seq !== this.seq) return;
    if (this.aoState.kind !== "complete") {
      this.aoState = { kind: "partial", probes };
      this.emit("ao");
    }
  }

  get isStale(): boolean {
    return this.appliedSeq !== this.seq;
  }

  /** Manual selection: delegate dig/undig/isolate to the kernel. */
  async pickAction(
    screen: [number, number],
    action: "dig" | "undig" | "isolate",
  ): Promise<PickHit | null> {
    const { hit, status } = await this.kernel.pick(this.status, screen, action);
    if (hit && status) {
      this.applyStatus(status);
    }
    return hit;
  }

  /** Set-plane button: delegate to the kernel's view-based placement. */
  async setPlaneFromView(snap: boolean): Promise<void> {
    const updated = await this.kernel.planeFromView(
      this.status,
      this.status.camera_direction,
      snap,
    );
    this.applyStatus(updated);
  }

  /** Invert the slicing plane in place. */
  invertPlane(): void {
    this.status.plane_normal = this.status.plane_normal.map((v) => -v) as Status["plane_normal"];
    this.status.plane_offset = -this.status.plane_offset;
    this.emit("status");
    this.kick();
  }

  /** Canonical status text for the clipboard. */
  copyStatus(): string {
    return serializeStatus(this.status);
  }

  /** Clipboard paste; invalid text leaves the session untouched. */
  pasteStatus(text: string): string[] {
    const { status, warnings } = parseStatus(text);
    this.applyStatus(status);
    return warnings;
  }

  /** Kernel-rendered snapshot PNG with the status embedded. */
  async snapshot(): Promise<Uint8Array> {
    return this.kernel.render(this.status, { aoProbes: this.aoProbes, seed: this.seed });
  }
}
