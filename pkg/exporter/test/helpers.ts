/** Test fixtures: a safetensors writer and a tiny trained tfjs MLP. */

import { writeFile } from "node:fs/promises";

export interface FixtureTensor {
  dtype: "F32" | "F64";
  shape: number[];
  data: Float32Array | Float64Array;
}

export async function writeSafetensors(
  path: string,
  tensors: Record<string, FixtureTensor>,
): Promise<void> {
  const header: Record<string, object> = {};
  const chunks: Buffer[] = [];
  let offset = 0;
  for (const [name, tensor] of Object.entries(tensors)) {
    const bytes = Buffer.from(tensor.data.buffer, tensor.data.byteOffset, tensor.data.byteLength);
    header[name] = {
      dtype: tensor.dtype,
      shape: tensor.shape,
      data_offsets: [offset, offset + bytes.length],
    };
    chunks.push(bytes);
    offset += bytes.length;
  }
  const headerJson = Buffer.from(JSON.stringify(header), "utf-8");
  const lenBuf = Buffer.alloc(8);
  lenBuf.writeBigUInt64LE(BigInt(headerJson.length));
  await writeFile(path, Buffer.concat([lenBuf, headerJson, ...chunks]));
}

export function seededTensor(shape: number[], seed: number): FixtureTensor {
  // deterministic filler so fixtures are reproducible without an RNG dep
  const count = shape.reduce((a, b) => a * b, 1);
  const data = new Float32Array(count);
  let state = seed >>> 0 || 1;
  for (let i = 0; i < count; i++) {
    // xorshift32
    state ^= state << 13;
    state ^= state >>> 17;
    state ^= state << 5;
    state >>>= 0;
    data[i] = (state / 0xffffffff - 0.5) * 2;
  }
  return { dtype: "F32", shape, data };
}

/**
 * Train a small dense network on a synthetic linear-teacher task and
 * return the kernels/biases as fixture tensors. Trained kernels develop
 * singular values that separate from the noise bulk, which is what the
 * end-to-end analysis assertion needs.
 */
export async function trainTinyMlp(): Promise<Record<string, FixtureTensor>> {
  const tf = await import("@tensorflow/tfjs");
  const dIn = 256;
  const nCls = 10;
  const samples = 2048;

  const xData = tf.randomNormal([samples, dIn], 0, 1, "float32", 7);
  const teacher = tf.randomNormal([dIn, nCls], 0, 1, "float32", 11);
  const labels = tf.matMul(xData, teacher).argMax(1);
  const yData = tf.oneHot(labels, nCls);

  const model = tf.sequential({
    layers: [
      tf.layers.dense({ units: 128, activation: "relu", inputShape: [dIn] }),
      tf.layers.dense({ units: 64, activation: "relu" }),
      tf.layers.dense({ units: nCls, activation: "softmax" }),
    ],
  });
  model.compile({ optimizer: tf.train.adam(1e-3), loss: "categoricalCrossentropy" });
  await model.fit(xData, yData, { epochs: 12, batchSize: 256, verbose: 0 });

  const out: Record<string, FixtureTensor> = {};
  model.layers.forEach((layer, index) => {
    const [kernel, bias] = layer.getWeights();
    out[`fc${index + 1}.weight`] = {
      dtype: "F32",
      shape: kernel.shape as number[],
      data: new Float32Array(kernel.dataSync()),
    };
    out[`fc${index + 1}.bias`] = {
      dtype: "F32",
      shape: bias.shape as number[],
      data: new Float32Array(bias.dataSync()),
    };
  });
  tf.dispose([xData, teacher, labels, yData]);
  model.dispose();
  return out;
}
