/**
 * Curve assembly: one curve per (scheme, schedule) pair, each point the
 * mean objective over seeds at one evaluation time. Gap mode subtracts a
 * reference optimum from the mean and drops nonpositive values so the
 * curves stay drawable on a log axis.
 */

import { BenchRow } from "./csv";

export interface CurvePoint {
  t: number;
  passes: number;
  y: number;
}

export interface Curve {
  scheme: string;
  schedule: string;
  label: string;
  points: CurvePoint[];
}

export function buildCurves(rows: BenchRow[], fstarValue?: number): Curve[] {
  const groups = new Map<string, BenchRow[]>();
  for (const row of rows) {
    const key = JSON.stringify([row.scheme, row.schedule]);
    const bucket = groups.get(key);
    if (bucket) bucket.push(row);
    else groups.set(key, [row]);
  }

  const schedulesPerScheme = new Map<string, Set<string>>();
  for (const key of groups.keys()) {
    const [scheme, schedule] = JSON.parse(key) as [string, string];
    if (!schedulesPerScheme.has(scheme)) schedulesPerScheme.set(scheme, new Set());
    schedulesPerScheme.get(scheme)!.add(schedule);
  }

  const curves: Curve[] = [];
  for (const [key, bucket] of groups) {
    const [scheme, schedule] = JSON.parse(key) as [string, string];
    const byTime = new Map<number, BenchRow[]>();
    for (const row of bucket) {
      const atT = byTime.get(row.t);
      if (atT) atT.push(row);
      else byTime.set(row.t, [row]);
    }
    let points: CurvePoint[] = [];
    for (const [t, atT] of byTime) {
      let sum = 0;
      for (const row of atT) sum += row.objective;
      const mean = sum / atT.length;
      points.push({
        t,
        passes: atT[0].effectivePasses,
        y: fstarValue === undefined ? mean : mean - fstarValue,
      });
    }
    points.sort((a, b) => a.t - b.t);
    if (fstarValue !== undefined) points = points.filter((p) => p.y > 0);
    const label =
      schedulesPerScheme.get(scheme)!.size > 1
        ? `${scheme} (${schedule})`
        : scheme;
    curves.push({ scheme, schedule, label, points });
  }

  curves.sort((a, b) =>
    a.scheme === b.scheme
      ? a.schedule.localeCompare(b.schedule)
      : a.scheme.localeCompare(b.scheme)
  );
  return curves;
}
