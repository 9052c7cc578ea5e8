/**
 * Minimal reader for the kernel's scene archives: zip containers with
 * uncompressed (stored) entries only.
 */

export class ZipError extends Error {}

export function readStoredZip(data: Uint8Array): Map<string, Uint8Array> {
  const view = new DataView(data.buffer, data.byteOffset, data.byteLength);
  const out = new Map<string, Uint8Array>();
  let pos = 0;
  while (pos + 4 <= data.length) {
    const sig = view.getUint32(pos, true);
    if (sig !== 0x04034b50) break; // first non-local-header: central directory
    const method = view.getUint16(pos + 8, true);
    const compressed = view.getUint32(pos + 18, true);
    const nameLen = view.getUint16(pos + 26, true);
    const extraLen = view.getUint16(pos + 28, true);
    const flags = view.getUint16(pos + 6, true);
    if (flags & 0x08) throw new ZipError("streamed zip entries are not supported");
    if (method !== 0) throw new ZipError("compressed zip entries are not supported");
    let name = "";
    for (let i = 0; i < nameLen; i++) name += String.fromCharCode(data[pos + 30 + i]);
    const start = pos + 30 + nameLen + extraLen;
    out.set(name, data.subarray(start, start + compressed));
    pos = start + compressed;
  }
  if (out.size === 0) throw new ZipError("no zip entries found");
  return out;
}
