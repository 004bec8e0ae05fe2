/**
 * Core export logic: checkpoint tensors -> NPY files + manifest.
 *
 * Only 2-D (fully connected) and 4-D (convolution) float tensors are
 * exported; bias vectors and other ranks are skipped. Conv tensors stay
 * 4-D -- the analysis side owns the reshape convention. Bytes are copied
 * verbatim, so values survive bit-exactly, and output is deterministic,
 * making re-export idempotent.
 */

import { mkdir, writeFile } from "node:fs/promises";
import { join } from "node:path";

import { Manifest, ManifestEntry, serializeManifest } from "./manifest.js";
import { dtypeOf, encodeNpy } from "./npy.js";
import { readSafetensors, TensorView } from "./safetensors.js";

export interface ExportOptions {
  checkpoint: string;
  outDir: string;
  /** Keep only tensors whose name contains one of these substrings. */
  include?: string[];
  model?: string;
  log?: (message: string) => void;
}

export interface ExportResult {
  manifest: Manifest;
  manifestPath: string;
  skipped: { name: string; reason: string }[];
}

const DTYPE_NAME = { F32: "float32", F64: "float64" } as const;

export function sanitizeName(name: string): string {
  const cleaned = name.replace(/[^A-Za-z0-9_.-]+/g, "_").replace(/^_+|_+$/g, "");
  return cleaned.length > 0 ? cleaned : "tensor";
}

function matchesInclude(name: string, include?: string[]): boolean {
  if (!include || include.length === 0) return true;
  return include.some((pattern) => name.includes(pattern));
}

function classify(tensor: TensorView): "fc" | "conv" | null {
  if (tensor.shape.length === 2) return "fc";
  if (tensor.shape.length === 4) return "conv";
  return null;
}

export async function exportCheckpoint(options: ExportOptions): Promise<ExportResult> {
  const log = options.log ?? (() => {});
  const { tensors, skippedDtypes } = await readSafetensors(options.checkpoint);

  const skipped: { name: string; reason: string }[] = skippedDtypes.map(
    ({ name, dtype }) => ({ name, reason: `unsupported dtype ${dtype}` }),
  );

  const selected: { tensor: TensorView; kind: "fc" | "conv" }[] = [];
  for (const tensor of tensors) {
    if (!matchesInclude(tensor.name, options.include)) {
      skipped.push({ name: tensor.name, reason: "filtered by --include" });
      continue;
    }
    const kind = classify(tensor);
    if (kind === null) {
      skipped.push({
        name: tensor.name,
        reason: `rank-${tensor.shape.length} tensor (only 2-D/4-D exported)`,
      });
      continue;
    }
    selected.push({ tensor, kind });
  }

  if (selected.length === 0) {
    throw new Error(
      `no 2-D/4-D float tensors to export from ${options.checkpoint}` +
        (options.include?.length ? ` matching --include ${options.include.join(",")}` : ""),
    );
  }

  await mkdir(options.outDir, { recursive: true });
  const entries: ManifestEntry[] = [];
  for (const { tensor, kind } of selected) {
    const fileName = `${sanitizeName(tensor.name)}.npy`;
    const npy = encodeNpy(dtypeOf(tensor.dtype), tensor.shape, tensor.bytes);
    await writeFile(join(options.outDir, fileName), npy);
    entries.push({
      name: tensor.name,
      path: fileName,
      kind,
      shape: tensor.shape,
      dtype: DTYPE_NAME[tensor.dtype],
    });
    log(`wrote ${fileName} (${kind}, [${tensor.shape}], ${DTYPE_NAME[tensor.dtype]})`);
  }

  const model =
    options.model ??
    (options.checkpoint.split("/").pop() ?? "model").replace(/\.[^.]*$/, "");
  const manifest: Manifest = { model, entries };
  const manifestPath = join(options.outDir, "manifest.json");
  await writeFile(manifestPath, serializeManifest(manifest));
  for (const { name, reason } of skipped) {
    log(`skipped ${name}: ${reason}`);
  }
  return { manifest, manifestPath, skipped };
}
