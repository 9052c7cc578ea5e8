import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { describe, expect, it } from "vitest";

import { decodeSceneArchive } from "../src/protocol.js";
import { parsePly } from "../src/ply.js";
import { readStoredZip } from "../src/zip.js";
import { runCli, writeGridMesh } from "./util.js";

function extractScene(extra: string[] = []): ReturnType<typeof decodeSceneArchive> {
  const meshPath = writeGridMesh(3, 3, 3);
  const out = join(dirname(meshPath), "scene.zip");
  runCli(["extract", meshPath, "-o", out, ...extra]);
  return decodeSceneArchive(new Uint8Array(readFileSync(out)));
}

describe("scene archive decoding", () => {
  it("reads the kernel's stored zip entries", () => {
    const meshPath = writeGridMesh(2, 2, 2);
    const out = join(dirname(meshPath), "scene.zip");
    runCli(["extract", meshPath, "-o", out]);
    const entries = readStoredZip(new Uint8Array(readFileSync(out)));
    expect([...entries.keys()]).toContain("surface.ply");
    expect([...entries.keys()]).toContain("meta.json");
  });

  it("parses the surface PLY with matching counts", () => {
    const scene = extractScene();
    expect(scene.surface).not.toBeNull();
    const surface = scene.surface!;
    // 3x3x3 grid, nothing hidden: 54 boundary quads, flat-shaded
    expect(surface.count).toBe(54 * 4);
    expect(surface.indices.length).toBe(54 * 2 * 3);
    expect(surface.positions.length).toBe(surface.count * 3);
    expect(surface.ao).toBeNull();
    expect(scene.meta.cells).toBe(27);
    expect(scene.meta.visible_cells).toBe(27);
    expect(scene.meta.max_peel_depth).toBe(1);
    expect(scene.wireframe.segments.length).toBeGreaterThan(0);
    expect(scene.silhouette).toBeNull();
  });

  it("carries baked AO when requested", () => {
    const scene = extractScene(["--with-ao", "--ao-probes", "32"]);
    expect(scene.meta.ao_baked).toBe(true);
    expect(scene.surface!.ao).not.toBeNull();
    const ao = scene.surface!.ao!;
    for (const v of ao) {
      expect(v).toBeGreaterThanOrEqual(0);
      expect(v).toBeLessThanOrEqual(1);
    }
  });

  it("includes the silhouette once cells are hidden", () => {
    const scene = extractScene(["--peel", "1"]);
    expect(scene.meta.visible_cells).toBe(1);
    expect(scene.silhouette).not.toBeNull();
    expect(scene.silhouette!.indices.length).toBe(54 * 2 * 3);
  });

  it("histogram metadata is self-consistent", () => {
    const scene = extractScene();
    const hist = scene.meta.histogram;
    const total = hist.counts.reduce((a, b) => a + b, 0);
    expect(total).toBe(scene.meta.cells);
    expect(hist.raw_lo.length).toBe(hist.counts.length);
  });
});
