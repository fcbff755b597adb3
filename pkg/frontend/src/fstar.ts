/** Reader for the optimum-estimate JSON file written by `bench fstar`. */

import { readFileSync } from "fs";

export interface FStarFile {
  value: number;
}

export function readFstarFile(path: string): FStarFile {
  const payload = JSON.parse(readFileSync(path, "utf-8"));
  const value = payload?.value;
  if (typeof value !== "number" || !Number.isFinite(value)) {
    throw new Error(`bad fstar file: missing numeric "value" in ${path}`);
  }
  return { value };
}
