// Canonical serialization + FNV-1a 64 digest, matching the server exactly:
// sorted keys, "," / ":" separators, JSON string escaping, and every number
// replaced by floor(x * 1e9 + 0.5). Digest equality is the convergence check.

export function quantize(x: number): number {
  return Math.floor(x * 1e9 + 0.5);
}

export function canonical(value: unknown): string {
  if (value === null || value === undefined) return "null";
  if (typeof value === "boolean") return value ? "true" : "false";
  if (typeof value === "number") return String(quantize(value));
  if (typeof value === "string") return JSON.stringify(value);
  if (Array.isArray(value)) return "[" + value.map(canonical).join(",") + "]";
  const obj = value as Record<string, unknown>;
  const parts = Object.keys(obj)
    .sort()
    .map((k) => JSON.stringify(k) + ":" + canonical(obj[k]));
  return "{" + parts.join(",") + "}";
}

const FNV_OFFSET = 0xcbf29ce484222325n;
const FNV_PRIME = 0x100000001b3n;
const MASK = 0xffffffffffffffffn;

export function fnv1a64(data: Uint8Array): bigint {
  let h = FNV_OFFSET;
  for (const byte of data) {
    h ^= BigInt(byte);
    h = (h * FNV_PRIME) & MASK;
  }
  return h;
}

export function digest(value: unknown): string {
  const bytes = new TextEncoder().encode(canonical(value));
  return fnv1a64(bytes).toString(16).padStart(16, "0");
}
