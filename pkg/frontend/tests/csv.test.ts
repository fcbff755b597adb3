import { expect, test } from "vitest";

import { parseBenchCsv, parseCsv } from "../src/csv";

const HEADER =
  "run_id,scheme,schedule,seed,t,effective_passes,objective,iterate_norm";

test("parseCsv splits plain rows", () => {
  expect(parseCsv("a,b\n1,2\n")).toEqual([
    ["a", "b"],
    ["1", "2"],
  ]);
});

test("parseCsv honors quoted commas and escaped quotes", () => {
  const text = 'x,"general:1.5,2.0",y\n"say ""hi""",2,3\n';
  expect(parseCsv(text)).toEqual([
    ["x", "general:1.5,2.0", "y"],
    ['say "hi"', "2", "3"],
  ]);
});

test("parseCsv tolerates CRLF and missing trailing newline", () => {
  expect(parseCsv("a,b\r\n1,2")).toEqual([
    ["a", "b"],
    ["1", "2"],
  ]);
});

test("parseBenchCsv reads typed rows", () => {
  const text = `${HEADER}\nclassical-0,W,classical,0,200,1.0,0.875,7.25\n`;
  const rows = parseBenchCsv(text);
  expect(rows).toHaveLength(1);
  expect(rows[0]).toEqual({
    runId: "classical-0",
    scheme: "W",
    schedule: "classical",
    seed: 0,
    t: 200,
    effectivePasses: 1.0,
    objective: 0.875,
    iterateNorm: 7.25,
  });
});

test("parseBenchCsv recovers exact doubles from round-trip formatting", () => {
  const objective = 0.9372663119400108;
  const text = `${HEADER}\ncl-0,0,cl,0,1,0.005,${objective},7.071534858693533\n`;
  expect(parseBenchCsv(text)[0].objective).toBe(objective);
});

test("quoted schedule names survive the bench schema", () => {
  const text = `${HEADER}\n"general:1.5,2.0-0",W,"general:1.5,2.0",0,10,1.0,0.5,1.0\n`;
  const rows = parseBenchCsv(text);
  expect(rows[0].schedule).toBe("general:1.5,2.0");
  expect(rows[0].runId).toBe("general:1.5,2.0-0");
});

test("missing column error names the column", () => {
  const noObjective = HEADER.replace(",objective", "");
  expect(() => parseBenchCsv(`${noObjective}\na,W,cl,0,1,0.1,1.0\n`)).toThrow(
    "missing column: objective"
  );
});

test("header-only input is rejected", () => {
  expect(() => parseBenchCsv(`${HEADER}\n`)).toThrow("no data rows");
  expect(() => parseBenchCsv("")).toThrow("no data rows");
});

test("non-numeric fields are rejected with position", () => {
  const text = `${HEADER}\na,W,cl,0,1,0.1,oops,1.0\n`;
  expect(() => parseBenchCsv(text)).toThrow("bad number in column objective at line 2");
});
