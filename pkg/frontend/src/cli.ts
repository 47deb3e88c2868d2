#!/usr/bin/env node
/**
 * plotkit — figures from snaptf CLI artifacts.
 *
 *   plotkit heatmap <grid.csv> -o <out.png>
 *   plotkit svd <manifest.json> -o <out.png>
 */

import * as fs from "node:fs";
import { fileURLToPath } from "node:url";

import { parseErrorGrid } from "./grid.js";
import { renderHeatmap } from "./heatmap.js";
import { parseManifest } from "./manifest.js";
import { encodePng } from "./png.js";
import { renderSvdPlot } from "./svdplot.js";

const USAGE = `usage:
  plotkit heatmap <grid.csv> -o <out.png>
  plotkit svd <manifest.json> -o <out.png>`;

interface Args {
  command: "heatmap" | "svd";
  input: string;
  output: string;
}

export function parseArgs(argv: string[]): Args {
  const positional: string[] = [];
  let output: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    if (a === "-o" || a === "--output") {
      output = argv[++i];
      if (output === undefined) throw new Error("-o needs a path");
    } else if (a === "-h" || a === "--help") {
      throw new Error(USAGE);
    } else {
      positional.push(a);
    }
  }
  if (positional.length !== 2) {
    throw new Error(USAGE);
  }
  const [command, input] = positional;
  if (command !== "heatmap" && command !== "svd") {
    throw new Error(`unknown command ${JSON.stringify(command)}\n${USAGE}`);
  }
  if (!output) {
    throw new Error("missing required -o <out.png>");
  }
  return { command, input, output };
}

export function run(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (exc) {
    process.stderr.write(`${(exc as Error).message}\n`);
    return 2;
  }
  try {
    const text = fs.readFileSync(args.input, "utf-8");
    const raster =
      args.command === "heatmap"
        ? renderHeatmap(parseErrorGrid(text))
        : renderSvdPlot(parseManifest(text));
    fs.writeFileSync(args.output, encodePng(raster.width, raster.height, raster.data));
    process.stdout.write(
      `${args.command}: ${raster.width}x${raster.height} png written to ${args.output}\n`,
    );
    return 0;
  } catch (exc) {
    process.stderr.write(`error: ${(exc as Error).message}\n`);
    return 1;
  }
}

function invokedDirectly(): boolean {
  if (!process.argv[1]) return false;
  try {
    return fs.realpathSync(process.argv[1]) === fileURLToPath(import.meta.url);
  } catch {
    return false;
  }
}

if (invokedDirectly()) {
  process.exit(run(process.argv.slice(2)));
}
