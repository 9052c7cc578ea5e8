import { describe, expect, it } from "vitest";

import {
  defaultStatus,
  parseStatus,
  serializeStatus,
  StatusError,
} from "../src/status.js";
import { runPython } from "./util.js";

function kernelSerialize(overrides: Record<string, unknown>): string {
  return runPython(
    "import sys, json\n" +
    "from hexview.snapshot import Status, serialize\n" +
    "st = Status()\n" +
    "for k, v in json.load(sys.stdin).items():\n" +
    "    setattr(st, k, v)\n" +
    "sys.stdout.write(serialize(st))",
    JSON.stringify(overrides),
  );
}

describe("canonical serialization parity with the kernel", () => {
  it("default status matches byte for byte", () => {
    expect(serializeStatus(defaultStatus())).toBe(kernelSerialize({}));
  });

  it("mutated statuses match byte for byte", () => {
    const cases: Array<Record<string, unknown>> = [
      { peel_min_depth: 3, metric: "SHA", colormap: "jet" },
      { plane_normal: [0.9486832980505138, 0.31622776601683794, 0.0], plane_enabled: true },
      { camera_direction: [-0.577350269189626, 0.577350269189626, -0.577350269189626] },
      { quality_threshold: 0.25, quality_threshold_raw: 0.96 },
      { dug: [5, 2, 9], undug: [1], isolated: 7 },
      { mode: "rounded", mode_param: 0.2, silhouette_alpha: 0.125 },
      { mesh: "bunny.mesh", image_size: [800, 600] },
      { plane_offset: 1e-7, camera_distance: 12345.6789 },
    ];
    for (const overrides of cases) {
      const ts = defaultStatus();
      Object.assign(ts, overrides);
      expect(serializeStatus(ts)).toBe(kernelSerialize(overrides));
    }
  });

  it("kernel parses viewer output and reproduces it", () => {
    const ts = defaultStatus();
    ts.metric = "ER";
    ts.plane_enabled = true;
    ts.plane_normal = [0.6, 0.64, 0.48];
    ts.plane_offset = 0.7071067811865476;
    const text = serializeStatus(ts);
    const roundtrip = runPython(
      "import sys\nfrom hexview.snapshot import parse, serialize\n" +
      "st, warnings = parse(sys.stdin.read())\n" +
      "assert not warnings, warnings\n" +
      "sys.stdout.write(serialize(st))",
      text,
    );
    expect(roundtrip).toBe(text);
  });
});

describe("tolerant parsing", () => {
  it("round-trips canonical text", () => {
    const text = serializeStatus(defaultStatus());
    const { status, warnings } = parseStatus(text);
    expect(warnings).toEqual([]);
    expect(serializeStatus(status)).toBe(text);
  });

  it("defaults missing keys with warnings", () => {
    const { status, warnings } = parseStatus('{"version": 1, "metric": "SHA"}');
    expect(status.metric).toBe("SHA");
    expect(status.colormap).toBe("none");
    expect(warnings.some((w) => w.includes("colormap"))).toBe(true);
  });

  it("warns on unknown keys", () => {
    const { warnings } = parseStatus('{"version": 1, "glitter": true}');
    expect(warnings.some((w) => w.includes("glitter"))).toBe(true);
  });

  it("rejects bad values", () => {
    expect(() => parseStatus('{"version": 1, "peel_min_depth": -3}')).toThrow(StatusError);
    expect(() => parseStatus('{"version": 2}')).toThrow(StatusError);
    expect(() => parseStatus("{oops")).toThrow(StatusError);
    expect(() => parseStatus('{"version": 1, "mode": "bubbly"}')).toThrow(StatusError);
  });
});
