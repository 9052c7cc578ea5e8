import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { describe, expect, it } from "vitest";

import {
  applySlider,
  irregularModeFromStep,
  peelDepthFromSlider,
  planeOffsetFromSlider,
  qualityThresholdFromSlider,
  SLIDERS,
} from "../src/controls.js";
import { decodeSceneArchive, SceneMeta } from "../src/protocol.js";
import { defaultStatus } from "../src/status.js";
import { runCli, writeGridMesh } from "./util.js";

function kernelScene(meshPath: string, flags: string[]) {
  const out = join(dirname(meshPath), `scene-${flags.join("").replace(/[^a-z0-9]/gi, "")}.zip`);
  runCli(["extract", meshPath, "-o", out, ...flags]);
  return decodeSceneArchive(new Uint8Array(readFileSync(out)));
}

describe("slider extreme contract, verified against the kernel", () => {
  const meshPath = writeGridMesh(3, 3, 3);
  const base = kernelScene(meshPath, []);
  const meta = base.meta;

  it("plane slider: left end hides nothing, right end hides everything", () => {
    const normal: [number, number, number] = [0.6, 0.64, 0.48];
    const left = planeOffsetFromSlider(meta, normal, 0);
    const right = planeOffsetFromSlider(meta, normal, 1);
    const sceneLeft = kernelScene(meshPath, [
      "--plane-normal", normal.join(","), "--plane-offset", String(left),
    ]);
    expect(sceneLeft.meta.visible_cells).toBe(27);
    const sceneRight = kernelScene(meshPath, [
      "--plane-normal", normal.join(","), "--plane-offset", String(right),
    ]);
    expect(sceneRight.meta.visible_cells).toBe(0);
  });

  it("peel slider spans [0, max depth + 1]", () => {
    expect(peelDepthFromSlider(meta.max_peel_depth, 0)).toBe(0);
    const full = peelDepthFromSlider(meta.max_peel_depth, 1);
    expect(full).toBe(meta.max_peel_depth + 1);
    const scene = kernelScene(meshPath, ["--peel", String(full)]);
    expect(scene.meta.visible_cells).toBe(0);
    expect(kernelScene(meshPath, ["--peel", "0"]).meta.visible_cells).toBe(27);
  });

  it("quality slider: left end hides nothing, right end hides all healthy cells", () => {
    const left = qualityThresholdFromSlider(0);
    const right = qualityThresholdFromSlider(1);
    expect(left).toBeGreaterThan(1);
    expect(right).toBeGreaterThan(0);
    const sceneLeft = kernelScene(meshPath, ["--quality-threshold", String(left)]);
    expect(sceneLeft.meta.visible_cells).toBe(27);
    const sceneRight = kernelScene(meshPath, ["--quality-threshold", String(right)]);
    expect(sceneRight.meta.visible_cells).toBe(0); // perfect grid: nothing at 0
  });

  it("discrete sliders cover their step ranges", () => {
    expect(irregularModeFromStep(0)).toBe("off");
    expect(irregularModeFromStep(3)).toBe("paper");
    const status = defaultStatus();
    applySlider(status, meta, "regularization", 1);
    expect(status.regularization).toBe(5);
    applySlider(status, meta, "regularization", 0);
    expect(status.regularization).toBe(0);
  });

  it("every slider maps to its own status fields", () => {
    const status = defaultStatus();
    for (const spec of SLIDERS) {
      const before = JSON.stringify(status);
      const changed = applySlider(status, meta, spec.id, 0.5);
      expect(changed.length).toBeGreaterThan(0);
      expect(JSON.stringify(status)).not.toBe(before);
    }
  });

  it("plane slider monotonicity in kernel visible counts", () => {
    const normal: [number, number, number] = [1, 0, 0];
    let previous = Infinity;
    for (const t of [0, 0.25, 0.5, 0.75, 1]) {
      const offset = planeOffsetFromSlider(meta, normal, t);
      const scene = kernelScene(meshPath, [
        "--plane-normal", "1,0,0", "--plane-offset", String(offset),
      ]);
      expect(scene.meta.visible_cells).toBeLessThanOrEqual(previous);
      previous = scene.meta.visible_cells;
    }
  });
});
