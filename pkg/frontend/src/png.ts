/**
 * PNG chunk access for status snapshots: reading (and writing) the
 * `hexalab-status` tEXt chunk that the kernel embeds in every render.
 */

import { parseStatus, Status, STATUS_KEYWORD } from "./status.js";

const SIGNATURE = [0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a];

export class PngError extends Error {}

export interface Chunk {
  tag: string;
  payload: Uint8Array;
  start: number;
  end: number;
}

export function isPng(data: Uint8Array): boolean {
  return data.length >= 8 && SIGNATURE.every((b, i) => data[i] === b);
}

export function* iterChunks(data: Uint8Array): Generator<Chunk> {
  if (!isPng(data)) {
    throw new PngError("not a PNG file");
  }
  const view = new DataView(data.buffer, data.byteOffset, data.byteLength);
  let pos = 8;
  while (pos < data.length) {
    if (pos + 8 > data.length) throw new PngError("truncated chunk header");
    const length = view.getUint32(pos);
    const tag = String.fromCharCode(data[pos + 4], data[pos + 5], data[pos + 6], data[pos + 7]);
    const end = pos + 12 + length;
    if (end > data.length) throw new PngError(`truncated ${tag} chunk`);
    yield { tag, payload: data.subarray(pos + 8, pos + 8 + length), start: pos, end };
    pos = end;
  }
}

export function getTextChunk(data: Uint8Array, keyword: string): string | null {
  const needle = keyword + "\0";
  for (const chunk of iterChunks(data)) {
    if (chunk.tag !== "tEXt") continue;
    let text = "";
    for (const byte of chunk.payload) text += String.fromCharCode(byte);
    if (text.startsWith(needle)) return text.slice(needle.length);
  }
  return null;
}

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(bytes: Uint8Array): number {
  let c = 0xffffffff;
  for (const b of bytes) c = CRC_TABLE[(c ^ b) & 0xff] ^ (c >>> 8);
  return (c ^ 0xffffffff) >>> 0;
}

/** Insert or replace a tEXt chunk right before IEND (latin-1 payload). */
export function setTextChunk(data: Uint8Array, keyword: string, value: string): Uint8Array {
  const needle = keyword + "\0";
  const payloadText = needle + value;
  const payload = new Uint8Array(payloadText.length + 4);
  payload.set([0x74, 0x45, 0x58, 0x74], 0); // "tEXt"
  for (let i = 0; i < payloadText.length; i++) {
    const code = payloadText.charCodeAt(i);
    if (code > 0xff) throw new PngError("tEXt payload must be latin-1");
    payload[4 + i] = code;
  }
  const chunk = new Uint8Array(payload.length + 8);
  new DataView(chunk.buffer).setUint32(0, payloadText.length);
  chunk.set(payload, 4);
  new DataView(chunk.buffer).setUint32(chunk.length - 4, crc32(payload));

  const pieces: Uint8Array[] = [new Uint8Array(SIGNATURE)];
  let iend: Uint8Array | null = null;
  for (const c of iterChunks(data)) {
    if (c.tag === "tEXt") {
      let text = "";
      for (const byte of c.payload) text += String.fromCharCode(byte);
      if (text.startsWith(needle)) continue;
    }
    if (c.tag === "IEND") {
      iend = data.subarray(c.start, c.end);
      continue;
    }
    pieces.push(data.subarray(c.start, c.end));
  }
  if (!iend) throw new PngError("missing IEND chunk");
  pieces.push(chunk, iend);
  const total = pieces.reduce((acc, p) => acc + p.length, 0);
  const out = new Uint8Array(total);
  let off = 0;
  for (const p of pieces) {
    out.set(p, off);
    off += p.length;
  }
  return out;
}

/** The embedded status of a kernel-produced snapshot, or null. */
export function extractStatus(png: Uint8Array): Status | null {
  const text = getTextChunk(png, STATUS_KEYWORD);
  if (text === null) return null;
  return parseStatus(text).status;
}
