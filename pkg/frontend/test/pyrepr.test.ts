import { describe, expect, it } from "vitest";

import { pyFloatRepr, pyJsonString } from "../src/pyrepr.js";
import { runPython } from "./util.js";

describe("pyFloatRepr", () => {
  it("matches the kernel's float text for hand-picked values", () => {
    const values = [
      0, -0, 1, -1, 0.5, 0.1, 1 / 3, 2 / 3, 1e-4, 1.0000000000000002,
      0.00001, 1e-7, 1.5e-7, 123456.789, 1e15, 1e16, 1.25e16, 9.87e21,
      5e-324, 0.35, 0.85, -0.45, 1e100, -2.5e-8, 4095.9999999999995,
    ];
    const expected = runPython(
      "import sys, json\n" +
      "vals = json.load(sys.stdin)\n" +
      "print(json.dumps([repr(float(v)) for v in vals]))",
      JSON.stringify(values.map((v) => (Object.is(v, -0) ? "-0.0" : v))),
    );
    const reprs = JSON.parse(expected) as string[];
    values.forEach((v, i) => {
      expect(pyFloatRepr(v), `value ${v}`).toBe(reprs[i]);
    });
  });

  it("matches the kernel for random doubles across magnitudes", () => {
    const rng = (() => {
      let s = 12345;
      return () => {
        s = (s * 1103515245 + 12345) % 2147483648;
        return s / 2147483648;
      };
    })();
    const values: number[] = [];
    for (let i = 0; i < 500; i++) {
      const exp = Math.floor(rng() * 60) - 30;
      const sign = rng() < 0.5 ? -1 : 1;
      values.push(sign * rng() * Math.pow(10, exp));
    }
    const expected = JSON.parse(
      runPython(
        "import sys, json\n" +
        "vals = json.load(sys.stdin)\n" +
        "print(json.dumps([repr(float(v)) for v in vals]))",
        JSON.stringify(values),
      ),
    ) as string[];
    values.forEach((v, i) => {
      expect(pyFloatRepr(v), `value ${v}`).toBe(expected[i]);
    });
  });

  it("rejects non-finite values", () => {
    expect(() => pyFloatRepr(NaN)).toThrow();
    expect(() => pyFloatRepr(Infinity)).toThrow();
  });
});

describe("pyJsonString", () => {
  it("matches ensure_ascii json for plain and unicode text", () => {
    const samples = ["", "mesh.mesh", 'quo"te', "back\\slash", "tab\there", "unicode é€"];
    const expected = JSON.parse(
      runPython(
        "import sys, json\n" +
        "vals = json.load(sys.stdin)\n" +
        "print(json.dumps([json.dumps(v) for v in vals]))",
        JSON.stringify(samples),
      ),
    ) as string[];
    samples.forEach((s, i) => {
      expect(pyJsonString(s)).toBe(expected[i]);
    });
  });
});
