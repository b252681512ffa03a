import { afterEach, describe, expect, it } from "vitest";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { main } from "../src/cli.js";
import { plantedCorpus, writeCorpusDir } from "./helpers.js";

const tmpDirs: string[] = [];
function tmpDir(): string {
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), "trainer-cli-"));
  tmpDirs.push(dir);
  return dir;
}

afterEach(() => {
  while (tmpDirs.length > 0) fs.rmSync(tmpDirs.pop()!, { recursive: true, force: true });
});

interface Captured {
  out: string[];
  err: string[];
  io: { stdout: (line: string) => void; stderr: (line: string) => void };
}

function capture(): Captured {
  const out: string[] = [];
  const err: string[] = [];
  return { out, err, io: { stdout: (line) => out.push(line), stderr: (line) => err.push(line) } };
}

const FIT_FLAGS = ["--tasks", "srr,rwi,ati,ltm", "--epochs", "2", "--seed", "7",
  "--layers", "1", "--hidden-dim", "16", "--heads", "2", "--max-seq-len", "16",
  "--mlp-hidden", "16", "--learning-rate", "0.002"];

function fitOnce(dataDir: string, outDir: string): Captured {
  const captured = capture();
  const code = main(["fit", "--data", dataDir, "--out", outDir, ...FIT_FLAGS], captured.io);
  expect(captured.err).toEqual([]);
  expect(code).toBe(0);
  return captured;
}

describe("trainer cli", () => {
  it("fit writes model.json and a trace, eval writes a report", () => {
    const dataDir = tmpDir();
    writeCorpusDir(dataDir, plantedCorpus({ articles: 40 }));
    const outDir = path.join(tmpDir(), "model");

    const fitRun = fitOnce(dataDir, outDir);
    expect(fitRun.out.some((line) => line.startsWith("epoch 1/2"))).toBe(true);
    expect(fs.existsSync(path.join(outDir, "model.json"))).toBe(true);

    const trace = fs.readFileSync(path.join(outDir, "trace.tsv"), "utf8").trimEnd().split("\n");
    expect(trace[0]).toBe("epoch\tsrr\trwi\tati\tltm\tcombined");
    expect(trace).toHaveLength(3);
    for (const row of trace.slice(1)) {
      const cells = row.split("\t");
      expect(cells).toHaveLength(6);
      for (const cell of cells.slice(1)) expect(Number.isFinite(Number(cell))).toBe(true);
    }

    const reportPath = path.join(tmpDir(), "report.txt");
    const evalRun = capture();
    const code = main(["eval", "--model", outDir, "--data", dataDir,
                       "--report", reportPath], evalRun.io);
    expect(evalRun.err).toEqual([]);
    expect(code).toBe(0);

    const report = fs.readFileSync(reportPath, "utf8").trimEnd().split("\n");
    expect(report[0]).toBe("task\tgroups\tgroup_accuracy\tmrr");
    expect(report).toHaveLength(6);
    expect(report[5].startsWith("all\t")).toBe(true);
    for (const row of report.slice(1)) {
      const [, groups, accuracy, mrr] = row.split("\t");
      expect(Number(groups)).toBeGreaterThan(0);
      expect(Number(accuracy)).toBeGreaterThanOrEqual(0);
      expect(Number(accuracy)).toBeLessThanOrEqual(1);
      expect(Number(mrr)).toBeGreaterThan(0);
      expect(Number(mrr)).toBeLessThanOrEqual(1);
    }
  });

  it("fit is deterministic across runs", () => {
    const dataDir = tmpDir();
    writeCorpusDir(dataDir, plantedCorpus({ articles: 12 }));
    const outA = path.join(tmpDir(), "a");
    const outB = path.join(tmpDir(), "b");
    fitOnce(dataDir, outA);
    fitOnce(dataDir, outB);
    expect(fs.readFileSync(path.join(outA, "model.json"), "utf8"))
      .toBe(fs.readFileSync(path.join(outB, "model.json"), "utf8"));
    expect(fs.readFileSync(path.join(outA, "trace.tsv"), "utf8"))
      .toBe(fs.readFileSync(path.join(outB, "trace.tsv"), "utf8"));
  });

  it("rejects missing flags, unknown commands and unknown tasks", () => {
    const missing = capture();
    expect(main(["fit", "--tasks", "srr"], missing.io)).toBe(1);
    expect(missing.err[0]).toMatch(/^trainer: error: fit requires --data/);

    const unknownCommand = capture();
    expect(main(["transmogrify"], unknownCommand.io)).toBe(1);
    expect(unknownCommand.err[0]).toMatch(/unknown command/);

    const dataDir = tmpDir();
    writeCorpusDir(dataDir, plantedCorpus({ articles: 4 }));
    const badTask = capture();
    expect(main(["fit", "--data", dataDir, "--tasks", "srr,bogus", "--epochs", "1",
                 "--seed", "1", "--out", path.join(dataDir, "m")], badTask.io)).toBe(1);
    expect(badTask.err[0]).toMatch(/unknown task/);

    const badFlag = capture();
    expect(main(["fit", "--data", dataDir, "--frobnicate"], badFlag.io)).toBe(1);
    expect(badFlag.err[0]).toMatch(/^trainer: error:/);
  });

  it("errors when an enabled task has no data file", () => {
    const dataDir = tmpDir();
    writeCorpusDir(dataDir, plantedCorpus({ articles: 4 }).filter((r) => r.task !== "ltm"));
    const captured = capture();
    const code = main(["fit", "--data", dataDir, "--out", path.join(dataDir, "m"),
                       ...FIT_FLAGS], captured.io);
    expect(code).toBe(1);
    expect(captured.err[0]).toMatch(/ltm/);
  });

  it("prints usage on --help and bare invocation", () => {
    const help = capture();
    expect(main(["--help"], help.io)).toBe(0);
    expect(help.out.join("\n")).toMatch(/usage: trainer/);

    const bare = capture();
    expect(main([], bare.io)).toBe(1);
    expect(bare.err.join("\n")).toMatch(/usage: trainer/);
  });
});
