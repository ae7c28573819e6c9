/**
 * Reader/writer for the packed bit-dataset container consumed by the engine.
 *
 * Little-endian layout: "FZDS" magic, u32 version, u64 sample count N,
 * u64 feature width F, u32 class count; N i32 labels; N rows of
 * 64-bit-aligned packed bits; trailing CRC32 of everything before it.
 */

const MAGIC = "FZDS";
const VERSION = 1;
const HEADER_BYTES = 4 + 4 + 8 + 8 + 4;

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c >>> 0;
  }
  return table;
})();

export function crc32(buf: Uint8Array): number {
  let c = 0xffffffff;
  for (let i = 0; i < buf.length; i++) {
    c = CRC_TABLE[(c ^ buf[i]) & 0xff] ^ (c >>> 8);
  }
  return (c ^ 0xffffffff) >>> 0;
}

export function wordsPerRow(featureCount: number): number {
  return Math.ceil(featureCount / 64);
}

export interface BitDataset {
  featureCount: number;
  classes: number;
  labels: number[];
  /** row-major boolean matrix, one row per sample */
  rows: boolean[][];
}

export function encodeContainer(dataset: BitDataset): Uint8Array {
  const { featureCount, classes, labels, rows } = dataset;
  const n = rows.length;
  if (labels.length !== n) {
    throw new Error("labels length must match sample count");
  }
  const nwords = wordsPerRow(featureCount);
  const body = new Uint8Array(HEADER_BYTES + n * 4 + n * nwords * 8);
  const view = new DataView(body.buffer);
  for (let i = 0; i < 4; i++) body[i] = MAGIC.charCodeAt(i);
  view.setUint32(4, VERSION, true);
  view.setBigUint64(8, BigInt(n), true);
  view.setBigUint64(16, BigInt(featureCount), true);
  view.setUint32(24, classes, true);
  let off = HEADER_BYTES;
  for (const label of labels) {
    view.setInt32(off, label, true);
    off += 4;
  }
  for (const row of rows) {
    if (row.length !== featureCount) {
      throw new Error(`row width ${row.length} does not match F=${featureCount}`);
    }
    for (let w = 0; w < nwords; w++) {
      let word = 0n;
      for (let b = 0; b < 64; b++) {
        const j = w * 64 + b;
        if (j < featureCount && row[j]) word |= 1n << BigInt(b);
      }
      view.setBigUint64(off, word, true);
      off += 8;
    }
  }
  const out = new Uint8Array(body.length + 4);
  out.set(body);
  new DataView(out.buffer).setUint32(body.length, crc32(body), true);
  return out;
}

export function decodeContainer(blob: Uint8Array): BitDataset {
  if (blob.length < HEADER_BYTES + 4) throw new Error("truncated container");
  const body = blob.subarray(0, blob.length - 4);
  const view = new DataView(blob.buffer, blob.byteOffset);
  const storedCrc = view.getUint32(blob.length - 4, true);
  if (crc32(body) !== storedCrc) throw new Error("checksum failure");
  const magic = String.fromCharCode(...blob.subarray(0, 4));
  if (magic !== MAGIC) throw new Error("bad magic");
  const version = view.getUint32(4, true);
  if (version !== VERSION) throw new Error(`unsupported version ${version}`);
  const n = Number(view.getBigUint64(8, true));
  const featureCount = Number(view.getBigUint64(16, true));
  const classes = view.getUint32(24, true);
  const nwords = wordsPerRow(featureCount);
  let off = HEADER_BYTES;
  const labels: number[] = [];
  for (let i = 0; i < n; i++) {
    labels.push(view.getInt32(off, true));
    off += 4;
  }
  const rows: boolean[][] = [];
  for (let i = 0; i < n; i++) {
    const row: boolean[] = [];
    for (let w = 0; w < nwords; w++) {
      const word = view.getBigUint64(off, true);
      off += 8;
      for (let b = 0; b < 64; b++) {
        const j = w * 64 + b;
        if (j < featureCount) row.push(((word >> BigInt(b)) & 1n) === 1n);
      }
    }
    rows.push(row);
  }
  return { featureCount, classes, labels, rows };
}
