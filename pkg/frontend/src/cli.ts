#!/usr/bin/env node
// plotkit — render figures from simulator CSV output.
//
// Usage:
//   plotkit cdf              --out fig.svg run/samples.csv
//   plotkit percentile-vs-k  --out fig.svg sweep/K_01/samples.csv sweep/K_02/samples.csv ...
//   plotkit sweep-cdf        --out fig.svg sweep/M_100/samples.csv sweep/M_200/samples.csv ...
//
// Options: --schemes CBF,ZFP  --title T  --xlabel X  --ylabel Y

import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";

import { plot, PlotKind } from "./plot.js";

const KINDS: Record<string, PlotKind> = {
  "cdf": "cdf",
  "percentile-vs-k": "percentile_vs_k",
  "sweep-cdf": "sweep_cdf",
};

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  const kind = KINDS[command ?? ""];
  if (!kind) {
    console.error(`usage: plotkit {${Object.keys(KINDS).join("|")}} --out FILE samples.csv...`);
    return 2;
  }
  let parsed;
  try {
    parsed = parseArgs({
      args: rest,
      allowPositionals: true,
      options: {
        out: { type: "string" },
        schemes: { type: "string" },
        title: { type: "string" },
        xlabel: { type: "string" },
        ylabel: { type: "string" },
      },
    });
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
  const { values, positionals } = parsed;
  if (!values.out || positionals.length === 0) {
    console.error("error: --out and at least one samples.csv are required");
    return 2;
  }
  try {
    const annotations = plot({
      kind,
      inputs: positionals,
      output: values.out,
      schemes: values.schemes?.split(",").map((s) => s.trim()),
      title: values.title,
      xLabel: values.xlabel,
      yLabel: values.ylabel,
    });
    for (const a of annotations) {
      console.log(`${a.scheme}.p05_se = ${a.p05}`);
    }
    console.log(`wrote ${values.out}`);
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
