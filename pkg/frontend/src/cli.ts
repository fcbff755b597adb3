/**
 * plots render --csv <file> [--csv <file> ...] [--gap --fstar <file>] --out <dir>
 *
 * One SVG per input CSV, named after the CSV basename. Default y-axis is
 * the raw objective; --gap plots objective minus the estimate from the
 * fstar JSON file on a log axis.
 */

import { mkdirSync, readFileSync, writeFileSync } from "fs";
import path from "path";
import yargs from "yargs";

import { parseBenchCsv } from "./csv";
import { readFstarFile } from "./fstar";
import { buildCurves } from "./series";
import { renderSvg } from "./svg";

export interface RenderArgs {
  csv: string[];
  gap: boolean;
  fstar?: string;
  out: string;
}

export function renderCommand(args: RenderArgs): string[] {
  if (args.gap && !args.fstar) {
    throw new Error("gap mode needs --fstar <file>");
  }
  const fstarValue = args.gap ? readFstarFile(args.fstar!).value : undefined;
  mkdirSync(args.out, { recursive: true });
  const written: string[] = [];
  for (const csvPath of args.csv) {
    const rows = parseBenchCsv(readFileSync(csvPath, "utf-8"));
    const curves = buildCurves(rows, fstarValue);
    const svg = renderSvg(curves, {
      title: args.gap
        ? "Optimality gap vs effective passes"
        : "Objective vs effective passes",
      yLabel: args.gap ? "objective - f* estimate" : "objective",
      logY: args.gap,
    });
    const base = path.basename(csvPath).replace(/\.csv$/i, "");
    const outPath = path.join(args.out, `${base}${args.gap ? "-gap" : ""}.svg`);
    writeFileSync(outPath, svg);
    console.log(`wrote ${outPath} (${curves.length} curves)`);
    written.push(outPath);
  }
  return written;
}

export async function runCli(argv: string[]): Promise<number> {
  let failed = false;
  await yargs(argv)
    .scriptName("plots")
    .command(
      "render",
      "render SVG convergence plots from bench CSV files",
      (y) =>
        y
          .option("csv", {
            type: "string",
            array: true,
            demandOption: true,
            describe: "bench CSV file (repeatable; one SVG per file)",
          })
          .option("gap", {
            type: "boolean",
            default: false,
            describe: "plot objective minus the f* estimate, log y-axis",
          })
          .option("fstar", {
            type: "string",
            describe: "f* estimate JSON (required with --gap)",
          })
          .option("out", {
            type: "string",
            demandOption: true,
            describe: "output directory",
          }),
      (args) => {
        try {
          renderCommand({
            csv: args.csv,
            gap: args.gap,
            fstar: args.fstar,
            out: args.out,
          });
        } catch (err) {
          console.error(`error: ${err instanceof Error ? err.message : err}`);
          failed = true;
        }
      }
    )
    .demandCommand(1)
    .strict()
    .fail((msg, err) => {
      console.error(`error: ${msg ?? err?.message}`);
      failed = true;
    })
    .exitProcess(false)
    .parseAsync();
  return failed ? 1 : 0;
}
