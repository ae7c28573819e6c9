/**
 * Thin bindings around the `fuzzytm` CLI so the engine drops into JS/TS
 * workflows. No logic of its own: every call shells out to the CLI and the
 * serialized model/container formats, so binding results are bit-identical
 * to direct CLI invocations.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { encodeContainer } from "./container.js";

export { crc32, decodeContainer, encodeContainer, wordsPerRow } from "./container.js";
export type { BitDataset } from "./container.js";

export interface TrainConfig {
  preset?: string;
  mode?: "binary" | "multiclass";
  classes?: number;
  clauses?: number;
  T?: number;
  S?: number;
  L?: number;
  lf?: number;
  epochs?: number;
  seed?: number;
  evalDataset?: string;
}

export interface ModelInfo {
  mode: "binary" | "multiclass";
  featureCount: number;
  classes: number;
  T: number;
  S: number;
  L: number;
  lf: number;
  clausesPerClass: number;
}

export class EngineError extends Error {}

export class BoundModel {
  readonly modelPath: string;
  readonly info: ModelInfo;
  private readonly workDir: string | null;
  private freed = false;

  constructor(modelPath: string, workDir: string | null = null) {
    this.modelPath = modelPath;
    this.workDir = workDir;
    this.info = readModelInfo(modelPath);
  }

  get isFreed(): boolean {
    return this.freed;
  }

  assertLive(): void {
    if (this.freed) throw new EngineError("model handle has been freed");
  }

  free(): void {
    if (this.freed) return;
    this.freed = true;
    if (this.workDir) rmSync(this.workDir, { recursive: true, force: true });
  }
}

function runCli(args: string[]): string {
  const res = spawnSync("fuzzytm", args, { encoding: "utf-8" });
  if (res.error) throw new EngineError(`failed to launch fuzzytm: ${res.error.message}`);
  if (res.status !== 0) {
    throw new EngineError(
      `fuzzytm ${args[0]} exited with ${res.status}: ${res.stderr.trim()}`,
    );
  }
  return res.stdout;
}

/** Parse the fixed little-endian model header (magic "FZTM"). */
export function readModelInfo(modelPath: string): ModelInfo {
  const blob = readFileSync(modelPath);
  const view = new DataView(blob.buffer, blob.byteOffset, blob.byteLength);
  const magic = String.fromCharCode(blob[0], blob[1], blob[2], blob[3]);
  if (magic !== "FZTM") throw new EngineError("bad model magic");
  const modeCode = view.getUint8(8);
  return {
    mode: modeCode === 0 ? "binary" : "multiclass",
    featureCount: view.getUint32(9, true),
    classes: view.getUint32(13, true),
    T: view.getUint32(17, true),
    L: view.getUint32(21, true),
    S: view.getFloat64(25, true),
    lf: view.getUint32(33, true),
    clausesPerClass: view.getUint32(37, true),
  };
}

function trainArgs(config: TrainConfig, datasetPath: string, modelPath: string): string[] {
  const args = ["train", "--data", datasetPath, "--model", modelPath];
  if (config.preset) args.push("--preset", config.preset);
  if (config.mode) args.push("--mode", config.mode);
  if (config.classes !== undefined) args.push("--classes", String(config.classes));
  if (config.clauses !== undefined) args.push("--clauses", String(config.clauses));
  if (config.T !== undefined) args.push("-T", String(config.T));
  if (config.S !== undefined) args.push("-S", String(config.S));
  if (config.L !== undefined) args.push("-L", String(config.L));
  if (config.lf !== undefined) args.push("--lf", String(config.lf));
  if (config.epochs !== undefined) args.push("--epochs", String(config.epochs));
  if (config.seed !== undefined) args.push("--seed", String(config.seed));
  if (config.evalDataset) args.push("--eval", config.evalDataset);
  return args;
}

/** Train a model on a packed container; same validation and bytes as the CLI. */
export function boundTrain(config: TrainConfig, datasetPath: string): BoundModel {
  const workDir = mkdtempSync(join(tmpdir(), "fuzzytm-"));
  const modelPath = join(workDir, "model.ftm");
  try {
    runCli(trainArgs(config, datasetPath, modelPath));
  } catch (err) {
    rmSync(workDir, { recursive: true, force: true });
    throw err;
  }
  return new BoundModel(modelPath, workDir);
}

/** Load an existing serialized model without owning its file. */
export function boundLoad(modelPath: string): BoundModel {
  return new BoundModel(modelPath);
}

/** Predict labels for a packed container; equals the engine's batch path. */
export function boundPredict(handle: BoundModel, containerPath: string): number[] {
  handle.assertLive();
  const out = join(mkdtempSync(join(tmpdir(), "fuzzytm-pred-")), "labels.txt");
  try {
    runCli(["predict", "--model", handle.modelPath, "--data", containerPath,
            "--out", out]);
    const text = readFileSync(out, "utf-8").trim();
    return text === "" ? [] : text.split("\n").map((s) => parseInt(s, 10));
  } finally {
    rmSync(join(out, ".."), { recursive: true, force: true });
  }
}

/** Accuracy of a model over a labeled container. */
export function boundEvaluate(handle: BoundModel, containerPath: string): number {
  handle.assertLive();
  const out = runCli(["eval", "--model", handle.modelPath, "--data", containerPath]);
  const match = out.match(/accuracy=([0-9.]+)/);
  if (!match) throw new EngineError(`unexpected eval output: ${out}`);
  return parseFloat(match[1]);
}

/** Write a container to disk from row-major boolean samples. */
export function writeContainerFile(
  path: string,
  rows: boolean[][],
  labels: number[],
  featureCount: number,
  classes: number,
): void {
  writeFileSync(path, encodeContainer({ featureCount, classes, labels, rows }));
}
