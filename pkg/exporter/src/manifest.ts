/**
 * The manifest schema shared with the analysis CLI: a model name plus
 * one entry per exported array, with paths relative to the manifest.
 */

import { z } from "zod";

export const ManifestEntrySchema = z.object({
  name: z.string().min(1),
  path: z.string().min(1),
  kind: z.enum(["fc", "conv"]),
  shape: z.array(z.number().int().positive()).min(1),
  dtype: z.enum(["float32", "float64"]),
});

export const ManifestSchema = z.object({
  model: z.string().min(1),
  entries: z.array(ManifestEntrySchema).min(1),
});

export type ManifestEntry = z.infer<typeof ManifestEntrySchema>;
export type Manifest = z.infer<typeof ManifestSchema>;

export function serializeManifest(manifest: Manifest): string {
  ManifestSchema.parse(manifest);
  return JSON.stringify(manifest, null, 2) + "\n";
}

export function parseManifest(text: string): Manifest {
  return ManifestSchema.parse(JSON.parse(text));
}
