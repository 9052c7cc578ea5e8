/**
 * Float formatting that byte-matches the kernel's canonical status text.
 *
 * The kernel serializes floats with shortest round-trip repr semantics:
 * fixed notation while the decimal point position is in (-3, 16], else
 * scientific with a sign and at least two exponent digits, and a
 * trailing ".0" on integral fixed-notation values.  JavaScript's
 * Number#toString differs in all three respects, so this module
 * reimplements the exact rules on top of toExponential()'s shortest
 * digit sequence.
 */

export function pyFloatRepr(x: number): string {
  if (!Number.isFinite(x)) {
    throw new Error(`cannot serialize non-finite number ${x}`);
  }
  if (x === 0) {
    return Object.is(x, -0) ? "-0.0" : "0.0";
  }
  const sign = x < 0 ? "-" : "";
  const sci = Math.abs(x).toExponential(); // shortest digits, e.g. "1.25e-7"
  const m = /^(\d)(?:\.(\d+))?e([+-]\d+)$/.exec(sci);
  if (!m) {
    throw new Error(`unexpected exponential form ${sci}`);
  }
  const digits = m[1] + (m[2] ?? "");
  const e10 = parseInt(m[3], 10);
  const decpt = e10 + 1; // digits before the decimal point

  if (decpt < -3 || decpt > 16) {
    const mantissa = digits.length > 1 ? `${digits[0]}.${digits.slice(1)}` : digits[0];
    const expSign = e10 < 0 ? "-" : "+";
    const expDigits = String(Math.abs(e10)).padStart(2, "0");
    return `${sign}${mantissa}e${expSign}${expDigits}`;
  }
  if (decpt <= 0) {
    return `${sign}0.${"0".repeat(-decpt)}${digits}`;
  }
  if (decpt >= digits.length) {
    return `${sign}${digits}${"0".repeat(decpt - digits.length)}.0`;
  }
  return `${sign}${digits.slice(0, decpt)}.${digits.slice(decpt)}`;
}

/** JSON string escaping that matches ensure_ascii text encoders. */
export function pyJsonString(s: string): string {
  let out = '"';
  for (const ch of s) {
    const code = ch.codePointAt(0)!;
    if (ch === '"') out += '\\"';
    else if (ch === "\\") out += "\\\\";
    else if (code === 0x08) out += "\\b";
    else if (code === 0x09) out += "\\t";
    else if (code === 0x0a) out += "\\n";
    else if (code === 0x0c) out += "\\f";
    else if (code === 0x0d) out += "\\r";
    else if (code < 0x20 || code > 0x7e) {
      if (code > 0xffff) {
        const v = code - 0x10000;
        const hi = 0xd800 + (v >> 10);
        const lo = 0xdc00 + (v & 0x3ff);
        out += `\\u${hi.toString(16).padStart(4, "0")}\\u${lo.toString(16).padStart(4, "0")}`;
      } else {
        out += `\\u${code.toString(16).padStart(4, "0")}`;
      }
    } else {
      out += ch;
    }
  }
  return out + '"';
}
