/**
 * ASCII PLY parser for the kernel's surface exports: per-vertex position,
 * normal, color, optional ambient-occlusion scalar, triangle faces.
 */

export class PlyError extends Error {}

export interface PlySurface {
  count: number;
  positions: Float32Array;  // 3 per vertex
  normals: Float32Array;    // 3 per vertex
  colors: Float32Array;     // 3 per vertex
  ao: Float32Array | null;  // 1 per vertex when baked
  indices: Uint32Array;     // 3 per triangle
}

export function parsePly(text: string): PlySurface {
  const lines = text.split("\n");
  let i = 0;
  if (lines[i++]?.trim() !== "ply") throw new PlyError("missing ply magic");
  let vertexCount = 0;
  let faceCount = 0;
  const vertexProps: string[] = [];
  let element: "vertex" | "face" | "" = "";
  for (; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line === "end_header") {
      i++;
      break;
    }
    const parts = line.split(/\s+/);
    if (parts[0] === "format" && parts[1] !== "ascii") {
      throw new PlyError("only ascii PLY is supported");
    }
    if (parts[0] === "element") {
      element = parts[1] as "vertex" | "face";
      if (parts[1] === "vertex") vertexCount = parseInt(parts[2], 10);
      if (parts[1] === "face") faceCount = parseInt(parts[2], 10);
    }
    if (parts[0] === "property" && element === "vertex" && parts[1] !== "list") {
      vertexProps.push(parts[parts.length - 1]);
    }
  }
  const col = (name: string) => {
    const idx = vertexProps.indexOf(name);
    if (idx < 0) throw new PlyError(`missing vertex property ${name}`);
    return idx;
  };
  const ix = col("x"), iy = col("y"), iz = col("z");
  const inx = col("nx"), iny = col("ny"), inz = col("nz");
  const ir = col("red"), ig = col("green"), ib = col("blue");
  const iao = vertexProps.indexOf("ao");

  const positions = new Float32Array(vertexCount * 3);
  const normals = new Float32Array(vertexCount * 3);
  const colors = new Float32Array(vertexCount * 3);
  const ao = iao >= 0 ? new Float32Array(vertexCount) : null;
  for (let v = 0; v < vertexCount; v++, i++) {
    const parts = lines[i].trim().split(/\s+/).map(Number);
    if (parts.length < vertexProps.length) throw new PlyError(`short vertex row ${v}`);
    positions.set([parts[ix], parts[iy], parts[iz]], v * 3);
    normals.set([parts[inx], parts[iny], parts[inz]], v * 3);
    colors.set([parts[ir], parts[ig], parts[ib]], v * 3);
    if (ao) ao[v] = parts[iao];
  }
  const indices = new Uint32Array(faceCount * 3);
  for (let f = 0; f < faceCount; f++, i++) {
    const parts = lines[i].trim().split(/\s+/).map(Number);
    if (parts[0] !== 3) throw new PlyError("faces must be triangles");
    indices.set([parts[1], parts[2], parts[3]], f * 3);
  }
  return { count: vertexCount, positions, normals, colors, ao, indices };
}
