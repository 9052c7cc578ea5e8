/**
 * Browser-side kernel client speaking the message protocol over the dev
 * server's HTTP bridge.
 */

import {
  decodeSceneArchive,
  Kernel,
  MeshInfo,
  PickHit,
  SceneData,
  SceneOptions,
} from "./protocol.js";
import { parseStatus, Status } from "./status.js";

export class HttpKernel implements Kernel {
  constructor(private base: string = "") {}

  private async post(path: string, body: unknown): Promise<Response> {
    const response = await fetch(this.base + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) {
      const detail = await response.text();
      throw new Error(`${path} failed: ${detail}`);
    }
    return response;
  }

  async loadMesh(name: string, bytes: Uint8Array): Promise<MeshInfo> {
    const response = await fetch(
      `${this.base}/api/load?name=${encodeURIComponent(name)}`,
      {
        method: "POST",
        headers: { "content-type": "application/octet-stream" },
        body: bytes as unknown as BodyInit,
      },
    );
    if (!response.ok) throw new Error(`load failed: ${await response.text()}`);
    return (await response.json()) as MeshInfo;
  }

  async scene(status: Status, options: SceneOptions = {}): Promise<SceneData> {
    const response = await this.post("/api/scene", { status, options });
    return decodeSceneArchive(new Uint8Array(await response.arrayBuffer()));
  }

  async render(status: Status, options: SceneOptions = {}): Promise<Uint8Array> {
    const response = await this.post("/api/render", { status, options });
    return new Uint8Array(await response.arrayBuffer());
  }

  async pick(
    status: Status,
    screen: [number, number],
    action: "report" | "dig" | "undig" | "isolate",
  ): Promise<{ hit: PickHit | null; status: Status | null }> {
    const response = await this.post("/api/pick", { status, screen, action });
    const data = (await response.json()) as {
      hit: PickHit | null;
      status: Record<string, unknown> | null;
    };
    return {
      hit: data.hit,
      status: data.status ? parseStatus(JSON.stringify(data.status)).status : null,
    };
  }

  async planeFromView(
    status: Status,
    viewDir: [number, number, number],
    snap: boolean,
  ): Promise<Status> {
    const response = await this.post("/api/plane-from-view", { status, viewDir, snap });
    return parseStatus(JSON.stringify(await response.json())).status;
  }
}
