import { execFileSync } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export const PYTHON = process.env.HEXVIEW_PYTHON ?? "python3";

export function runPython(code: string, input?: string): string {
  return execFileSync(PYTHON, ["-c", code], {
    input,
    encoding: "utf-8",
    maxBuffer: 64 * 1024 * 1024,
  });
}

export function runCli(args: string[]): string {
  return execFileSync(PYTHON, ["-m", "hexview.cli", ...args], {
    encoding: "utf-8",
    maxBuffer: 256 * 1024 * 1024,
  });
}

/** MEDIT text for an nx*ny*nz unit grid (same layout the kernel tests use). */
export function gridMeshText(nx: number, ny: number, nz: number): string {
  const vid = (i: number, j: number, k: number) =>
    (i * (ny + 1) + j) * (nz + 1) + k;
  const lines = ["MeshVersionFormatted 2", "Dimension 3", "Vertices",
    String((nx + 1) * (ny + 1) * (nz + 1))];
  for (let i = 0; i <= nx; i++)
    for (let j = 0; j <= ny; j++)
      for (let k = 0; k <= nz; k++) lines.push(`${i} ${j} ${k} 0`);
  const cells: string[] = [];
  for (let i = 0; i < nx; i++)
    for (let j = 0; j < ny; j++)
      for (let k = 0; k < nz; k++) {
        const c = [
          vid(i, j, k), vid(i + 1, j, k), vid(i + 1, j + 1, k), vid(i, j + 1, k),
          vid(i, j, k + 1), vid(i + 1, j, k + 1), vid(i + 1, j + 1, k + 1), vid(i, j + 1, k + 1),
        ];
        cells.push(c.map((v) => v + 1).join(" ") + " 0");
      }
  lines.push("Hexahedra", String(cells.length), ...cells, "End");
  return lines.join("\n") + "\n";
}

export function writeGridMesh(nx: number, ny: number, nz: number): string {
  const dir = mkdtempSync(join(tmpdir(), "hexview-fe-"));
  const path = join(dir, `grid${nx}${ny}${nz}.mesh`);
  writeFileSync(path, gridMeshText(nx, ny, nz));
  return path;
}
