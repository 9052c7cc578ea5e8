/**
 * Kernel host for node: every request shells out to the installed
 * hexview CLI, so the viewer consumes the toolkit exclusively through
 * its public command-line surface and file formats.
 */

import { execFile } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { promisify } from "node:util";

import {
  decodeSceneArchive,
  Kernel,
  MeshInfo,
  PickHit,
  SceneData,
  SceneOptions,
} from "../src/protocol.js";
import { parseStatus, serializeStatus, Status } from "../src/status.js";

const execFileAsync = promisify(execFile);

const PYTHON = process.env.HEXVIEW_PYTHON ?? "python3";
const MAX_BUFFER = 256 * 1024 * 1024;

export class CliKernel implements Kernel {
  private workdir: string;
  private meshPath: string | null = null;
  private requestCounter = 0;

  constructor() {
    this.workdir = mkdtempSync(join(tmpdir(), "hexview-kernel-"));
  }

  dispose(): void {
    rmSync(this.workdir, { recursive: true, force: true });
  }

  private async run(args: string[]): Promise<{ stdout: string; stderr: string }> {
    return execFileAsync(PYTHON, ["-m", "hexview.cli", ...args], {
      maxBuffer: MAX_BUFFER,
    });
  }

  private statusFile(status: Status): string {
    const path = join(this.workdir, `status-${this.requestCounter++}.json`);
    writeFileSync(path, serializeStatus(status));
    return path;
  }

  private requireMesh(): string {
    if (!this.meshPath) throw new Error("no mesh loaded");
    return this.meshPath;
  }

  async loadMesh(name: string, bytes: Uint8Array): Promise<MeshInfo> {
    const safe = name.replace(/[^A-Za-z0-9._-]/g, "_");
    const path = join(this.workdir, safe);
    writeFileSync(path, bytes);
    const { stdout } = await this.run(["info", path, "--json"]);
    this.meshPath = path;
    const report = JSON.parse(stdout) as MeshInfo & { name: string };
    report.name = name;
    return report;
  }

  /** Raw scene archive bytes (the wire format served over HTTP). */
  async sceneArchive(status: Status, options: SceneOptions = {}): Promise<Uint8Array> {
    const mesh = this.requireMesh();
    const out = join(this.workdir, `scene-${this.requestCounter++}.zip`);
    const args = ["extract", mesh, "-o", out, "--status", this.statusFile(status)];
    if (options.withAo) {
      args.push("--with-ao", "--ao-probes", String(options.aoProbes ?? 256));
    }
    if (options.seed !== undefined) args.push("--seed", String(options.seed));
    await this.run(args);
    const { readFileSync } = await import("node:fs");
    return new Uint8Array(readFileSync(out));
  }

  async scene(status: Status, options: SceneOptions = {}): Promise<SceneData> {
    return decodeSceneArchive(await this.sceneArchive(status, options));
  }

  async render(status: Status, options: SceneOptions = {}): Promise<Uint8Array> {
    const mesh = this.requireMesh();
    const out = join(this.workdir, `frame-${this.requestCounter++}.png`);
    const args = ["render", mesh, "-o", out, "--status", this.statusFile(status)];
    if (options.aoProbes !== undefined) args.push("--ao-probes", String(options.aoProbes));
    if (options.seed !== undefined) args.push("--seed", String(options.seed));
    await this.run(args);
    const { readFileSync } = await import("node:fs");
    return new Uint8Array(readFileSync(out));
  }

  async pick(
    status: Status,
    screen: [number, number],
    action: "report" | "dig" | "undig" | "isolate",
  ): Promise<{ hit: PickHit | null; status: Status | null }> {
    const mesh = this.requireMesh();
    const { stdout } = await this.run([
      "pick", mesh,
      "--status", this.statusFile(status),
      "--screen", `${screen[0]},${screen[1]}`,
      "--action", action,
    ]);
    const result = JSON.parse(stdout) as {
      hit: boolean;
      cell?: number;
      face?: number;
      status: Record<string, unknown> | null;
    };
    if (!result.hit) return { hit: null, status: null };
    const updated = result.status
      ? parseStatus(JSON.stringify(result.status)).status
      : null;
    return { hit: { cell: result.cell!, face: result.face! }, status: updated };
  }

  async planeFromView(
    status: Status,
    viewDir: [number, number, number],
    snap: boolean,
  ): Promise<Status> {
    const args = [
      "plane-from-view",
      "--status", this.statusFile(status),
      `--view-dir=${viewDir[0]},${viewDir[1]},${viewDir[2]}`,
    ];
    if (snap) args.push("--snap");
    const { stdout } = await this.run(args);
    return parseStatus(stdout).status;
  }
}
