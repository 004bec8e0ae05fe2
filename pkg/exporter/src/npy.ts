/**
 * NPY v1.0 serialization (little-endian floats, C order).
 *
 * The writer copies raw checkpoint bytes verbatim after the header, so a
 * checkpoint -> NPY -> reader roundtrip is bit-exact. The reader exists
 * for tests and covers exactly what the writer can emit.
 */

const MAGIC = Buffer.from("\x93NUMPY", "latin1");

export type NpyDtype = "<f4" | "<f8";

export function dtypeOf(safetensorsDtype: "F32" | "F64"): NpyDtype {
  return safetensorsDtype === "F32" ? "<f4" : "<f8";
}

function shapeTuple(shape: number[]): string {
  if (shape.length === 1) return `(${shape[0]},)`;
  return `(${shape.join(", ")})`;
}

/** Serialize raw little-endian float bytes as an NPY v1.0 buffer. */
export function encodeNpy(dtype: NpyDtype, shape: number[], data: Uint8Array): Buffer {
  const count = shape.reduce((a, b) => a * b, 1);
  const itemSize = dtype === "<f4" ? 4 : 8;
  if (data.length !== count * itemSize) {
    throw new Error(
      `shape [${shape}] with ${dtype} needs ${count * itemSize} bytes, got ${data.length}`,
    );
  }
  let header =
    `{'descr': '${dtype}', 'fortran_order': False, 'shape': ${shapeTuple(shape)}, }`;
  // pad with spaces so magic+version+len+header is 64-byte aligned, end with \n
  const unpadded = MAGIC.length + 2 + 2 + header.length + 1;
  header = header + " ".repeat((64 - (unpadded % 64)) % 64) + "\n";

  const head = Buffer.alloc(MAGIC.length + 4 + header.length);
  MAGIC.copy(head, 0);
  head[6] = 1; // major version
  head[7] = 0; // minor version
  head.writeUInt16LE(header.length, 8);
  head.write(header, 10, "latin1");
  return Buffer.concat([head, data]);
}

export interface NpyArray {
  dtype: NpyDtype;
  shape: number[];
  data: Uint8Array;
}

export function decodeNpy(buf: Buffer): NpyArray {
  if (!buf.subarray(0, 6).equals(MAGIC)) {
    throw new Error("not an NPY file: bad magic");
  }
  const major = buf[6];
  if (major !== 1) {
    throw new Error(`unsupported NPY version ${major}`);
  }
  const headerLen = buf.readUInt16LE(8);
  const header = buf.subarray(10, 10 + headerLen).toString("latin1");
  const match =
    /^\{'descr': '([^']+)', 'fortran_order': (True|False), 'shape': \(([0-9, ]*)\), \} *\n$/.exec(
      header,
    );
  if (!match) {
    throw new Error(`unparseable NPY header: ${JSON.stringify(header)}`);
  }
  const [, descr, fortran, shapeStr] = match;
  if (descr !== "<f4" && descr !== "<f8") {
    throw new Error(`unsupported dtype ${descr}`);
  }
  if (fortran === "True") {
    throw new Error("fortran-order arrays are not supported");
  }
  const shape = shapeStr
    .split(",")
    .map((s) => s.trim())
    .filter((s) => s.length > 0)
    .map(Number);
  return { dtype: descr, shape, data: buf.subarray(10 + headerLen) };
}
