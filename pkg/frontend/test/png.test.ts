import { readFileSync } from "node:fs";
import { join, dirname } from "node:path";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { describe, expect, it } from "vitest";

import { extractStatus, getTextChunk, isPng, setTextChunk } from "../src/png.js";
import { parseStatus, serializeStatus, defaultStatus } from "../src/status.js";
import { runCli, runPython, writeGridMesh } from "./util.js";

function renderSample(): { png: Uint8Array; meshPath: string } {
  const meshPath = writeGridMesh(2, 2, 2);
  const out = join(dirname(meshPath), "sample.png");
  runCli([
    "render", meshPath, "-o", out,
    "--ao-probes", "32", "--size", "64x48", "--metric", "SHA", "--colormap", "jet",
  ]);
  return { png: new Uint8Array(readFileSync(out)), meshPath };
}

describe("snapshot PNG metadata", () => {
  it("extracts the kernel-embedded status from a rendered PNG", () => {
    const { png } = renderSample();
    expect(isPng(png)).toBe(true);
    const status = extractStatus(png);
    expect(status).not.toBeNull();
    expect(status!.metric).toBe("SHA");
    expect(status!.colormap).toBe("jet");
    expect(status!.image_size).toEqual([64, 48]);
    expect(status!.mesh.endsWith(".mesh")).toBe(true);
  });

  it("kernel text and viewer serialization agree", () => {
    const { png } = renderSample();
    const text = getTextChunk(png, "hexalab-status")!;
    const { status } = parseStatus(text);
    expect(serializeStatus(status)).toBe(text);
  });

  it("returns null for PNGs without a snapshot", () => {
    // tiny 1x1 PNG built by the kernel's own encoder, no status chunk
    const dir = mkdtempSync(join(tmpdir(), "hexview-png-"));
    const raw = join(dir, "plain.png");
    runPython(
      "import numpy as np\n" +
      "from hexview.pngio import encode_rgba\n" +
      `open(${JSON.stringify(raw)}, 'wb').write(encode_rgba(np.zeros((1, 1, 4), dtype=np.uint8)))`,
    );
    const png = new Uint8Array(readFileSync(raw));
    expect(extractStatus(png)).toBeNull();
  });

  it("round-trips a status chunk written from the viewer side", () => {
    const { png } = renderSample();
    const st = defaultStatus();
    st.peel_min_depth = 2;
    st.mesh = "edited.mesh";
    const rewritten = setTextChunk(png, "hexalab-status", serializeStatus(st));
    const back = extractStatus(rewritten);
    expect(back).not.toBeNull();
    expect(back!.peel_min_depth).toBe(2);
    expect(back!.mesh).toBe("edited.mesh");
    // single chunk: rewriting replaced the kernel's copy
    let count = 0;
    const needle = "hexalab-status\0";
    for (const line of [getTextChunk(rewritten, "hexalab-status")]) {
      if (line !== null) count++;
    }
    expect(count).toBe(1);
  });
});
