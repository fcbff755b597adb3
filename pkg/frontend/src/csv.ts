/**
 * Quote-aware CSV parsing for the bench output schema. Schedule names may
 * contain commas (general:c,b), so the reader must honor RFC 4180 quoting.
 */

export interface BenchRow {
  runId: string;
  scheme: string;
  schedule: string;
  seed: number;
  t: number;
  effectivePasses: number;
  objective: number;
  iterateNorm: number;
}

export const REQUIRED_COLUMNS = [
  "run_id",
  "scheme",
  "schedule",
  "seed",
  "t",
  "effective_passes",
  "objective",
  "iterate_norm",
] as const;

/** Split CSV text into rows of fields, honoring double-quote escaping. */
export function parseCsv(text: string): string[][] {
  const rows: string[][] = [];
  let field = "";
  let row: string[] = [];
  let inQuotes = false;
  let i = 0;
  const push = () => {
    row.push(field);
    field = "";
  };
  const endRow = () => {
    push();
    rows.push(row);
    row = [];
  };
  while (i < text.length) {
    const ch = text[i];
    if (inQuotes) {
      if (ch === '"') {
        if (text[i + 1] === '"') {
          field += '"';
          i += 2;
          continue;
        }
        inQuotes = false;
        i++;
        continue;
      }
      field += ch;
      i++;
      continue;
    }
    if (ch === '"') {
      inQuotes = true;
      i++;
    } else if (ch === ",") {
      push();
      i++;
    } else if (ch === "\n") {
      endRow();
      i++;
    } else if (ch === "\r") {
      i++; // tolerate CRLF
    } else {
      field += ch;
      i++;
    }
  }
  if (field.length > 0 || row.length > 0) endRow();
  return rows;
}

function numberField(raw: string, column: string, line: number): number {
  const value = Number(raw);
  if (raw.trim() === "" || !Number.isFinite(value)) {
    throw new Error(`bad number in column ${column} at line ${line}: ${raw}`);
  }
  return value;
}

/** Parse bench CSV text into typed rows, validating the schema. */
export function parseBenchCsv(text: string): BenchRow[] {
  const table = parseCsv(text);
  if (table.length === 0) throw new Error("no data rows");
  const header = table[0];
  const index = new Map(header.map((name, i) => [name, i]));
  for (const column of REQUIRED_COLUMNS) {
    if (!index.has(column)) throw new Error(`missing column: ${column}`);
  }
  const col = (name: string) => index.get(name)!;
  const rows: BenchRow[] = [];
  for (let r = 1; r < table.length; r++) {
    const fields = table[r];
    const line = r + 1;
    rows.push({
      runId: fields[col("run_id")],
      scheme: fields[col("scheme")],
      schedule: fields[col("schedule")],
      seed: numberField(fields[col("seed")], "seed", line),
      t: numberField(fields[col("t")], "t", line),
      effectivePasses: numberField(
        fields[col("effective_passes")],
        "effective_passes",
        line
      ),
      objective: numberField(fields[col("objective")], "objective", line),
      iterateNorm: numberField(fields[col("iterate_norm")], "iterate_norm", line),
    });
  }
  if (rows.length === 0) throw new Error("no data rows");
  return rows;
}
