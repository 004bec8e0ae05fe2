/**
 * Minimal safetensors reader.
 *
 * Layout: 8-byte little-endian u64 header length, JSON header mapping
 * tensor names to { dtype, shape, data_offsets: [start, end] } (offsets
 * relative to the byte after the header), then the raw buffer. Only the
 * float dtypes the analysis pipeline accepts are surfaced; everything
 * else is reported so the caller can warn and move on.
 */

import { readFile } from "node:fs/promises";

export type FloatDtype = "F32" | "F64";

export interface TensorView {
  name: string;
  dtype: FloatDtype;
  shape: number[];
  /** Raw little-endian bytes, exactly as stored in the checkpoint. */
  bytes: Uint8Array;
}

export interface SafetensorsFile {
  tensors: TensorView[];
  /** Names present in the checkpoint but not float32/float64. */
  skippedDtypes: { name: string; dtype: string }[];
}

const BYTES_PER: Record<FloatDtype, number> = { F32: 4, F64: 8 };

interface HeaderEntry {
  dtype: string;
  shape: number[];
  data_offsets: [number, number];
}

export async function readSafetensors(path: string): Promise<SafetensorsFile> {
  let raw: Buffer;
  try {
    raw = await readFile(path);
  } catch (err) {
    throw new Error(`cannot read checkpoint ${path}: ${(err as Error).message}`);
  }
  if (raw.length < 8) {
    throw new Error(`${path}: too short to be a safetensors file`);
  }
  const headerLen = new DataView(raw.buffer, raw.byteOffset, 8).getBigUint64(0, true);
  const headerEnd = 8 + Number(headerLen);
  if (headerEnd > raw.length) {
    throw new Error(`${path}: header length ${headerLen} exceeds file size`);
  }

  let header: Record<string, HeaderEntry>;
  try {
    header = JSON.parse(raw.subarray(8, headerEnd).toString("utf-8"));
  } catch (err) {
    throw new Error(`${path}: malformed safetensors header: ${(err as Error).message}`);
  }

  const dataStart = headerEnd;
  const tensors: TensorView[] = [];
  const skippedDtypes: { name: string; dtype: string }[] = [];

  for (const [name, entry] of Object.entries(header)) {
    if (name === "__metadata__") continue;
    const { dtype, shape, data_offsets: offsets } = entry;
    if (dtype !== "F32" && dtype !== "F64") {
      skippedDtypes.push({ name, dtype });
      continue;
    }
    const [start, end] = offsets;
    const count = shape.reduce((a, b) => a * b, 1);
    if (end - start !== count * BYTES_PER[dtype]) {
      throw new Error(
        `${path}: tensor ${name} has ${end - start} bytes but shape ` +
          `[${shape}] implies ${count * BYTES_PER[dtype]}`,
      );
    }
    if (dataStart + end > raw.length) {
      throw new Error(`${path}: tensor ${name} extends past end of file`);
    }
    tensors.push({
      name,
      dtype,
      shape: [...shape],
      bytes: raw.subarray(dataStart + start, dataStart + end),
    });
  }

  tensors.sort((a, b) => (a.name < b.name ? -1 : a.name > b.name ? 1 : 0));
  return { tensors, skippedDtypes };
}
