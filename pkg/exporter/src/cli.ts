#!/usr/bin/env node
/**
 * rmt-spectre-export <checkpoint.safetensors> --out <dir>
 *                    [--include pattern[,pattern...]] [--model name]
 *
 * Writes one NPY per 2-D/4-D float tensor plus manifest.json, the format
 * the analysis CLI consumes directly: rmt-spectre analyze <dir>/manifest.json
 */

import { parseArgs } from "node:util";

import { exportCheckpoint } from "./export.js";

function usage(): void {
  console.error(
    "usage: rmt-spectre-export <checkpoint.safetensors> --out <dir> " +
      "[--include pattern[,pattern...]] [--model name]",
  );
}

async function main(): Promise<number> {
  let parsed;
  try {
    parsed = parseArgs({
      args: process.argv.slice(2),
      allowPositionals: true,
      options: {
        out: { type: "string" },
        include: { type: "string" },
        model: { type: "string" },
        help: { type: "boolean", short: "h" },
      },
    });
  } catch (err) {
    console.error((err as Error).message);
    usage();
    return 1;
  }

  if (parsed.values.help) {
    usage();
    return 0;
  }
  if (parsed.positionals.length !== 1 || !parsed.values.out) {
    usage();
    return 1;
  }

  const include = parsed.values.include
    ? parsed.values.include.split(",").filter((s) => s.length > 0)
    : undefined;

  try {
    const result = await exportCheckpoint({
      checkpoint: parsed.positionals[0],
      outDir: parsed.values.out,
      include,
      model: parsed.values.model,
      log: (message) => console.error(message),
    });
    console.log(result.manifestPath);
    return 0;
  } catch (err) {
    console.error(`export failed: ${(err as Error).message}`);
    return 2;
  }
}

main().then((code) => {
  process.exitCode = code;
});
