/**
 * Hand-rolled SVG line chart. Geometry is rounded for compactness, but
 * every polyline also carries its exact curve data in data-* attributes
 * (JSON number arrays, shortest round-trip), so consumers can recover the
 * plotted values bit-for-bit from the image file.
 */

import { Curve } from "./series";

export interface RenderOptions {
  title: string;
  yLabel: string;
  logY: boolean;
}

const PALETTE = [
  "#4361ee",
  "#e63946",
  "#2d6a4f",
  "#f77f00",
  "#7209b7",
  "#0096c7",
  "#b5179e",
  "#606c38",
  "#9d4edd",
  "#bc6c25",
];

function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((n) => n >= rough) ?? rough;
  const ticks: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + step * 0.01; v += step) {
    ticks.push(v);
  }
  return ticks;
}

function decadeTicks(min: number, max: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(min) - 1e-12); Math.pow(10, e) <= max * (1 + 1e-12); e++) {
    ticks.push(Math.pow(10, e));
  }
  if (ticks.length >= 2) return ticks;
  // under one decade of range: fall back to 1-2-5 mantissa ticks
  const out: number[] = [];
  for (let e = Math.floor(Math.log10(min)); e <= Math.ceil(Math.log10(max)); e++) {
    for (const m of [1, 2, 5]) {
      const v = m * Math.pow(10, e);
      if (v >= min * (1 - 1e-12) && v <= max * (1 + 1e-12)) out.push(v);
    }
  }
  return out.length > 0 ? out : [min, max];
}

function fmtTick(v: number): string {
  if (v !== 0 && (Math.abs(v) >= 1e4 || Math.abs(v) < 1e-3)) {
    return v.toExponential(0).replace("+", "");
  }
  return v % 1 === 0 ? String(v) : String(Number(v.toPrecision(3)));
}

export function renderSvg(curves: Curve[], opts: RenderOptions): string {
  const drawable = curves.filter((c) => c.points.length > 0);
  if (drawable.length === 0) throw new Error("no drawable curve points");

  const W = 720;
  const H = 400;
  const ml = 64;
  const mr = 150;
  const mt = 36;
  const mb = 46;
  const pw = W - ml - mr;
  const ph = H - mt - mb;

  const xs = drawable.flatMap((c) => c.points.map((p) => p.passes));
  const ys = drawable.flatMap((c) => c.points.map((p) => p.y));
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yMin = Math.min(...ys);
  const yMax = Math.max(...ys);

  const xOf = (v: number) => ml + ((v - xMin) / (xMax - xMin || 1)) * pw;
  let yOf: (v: number) => number;
  let yTicks: number[];
  if (opts.logY) {
    const lo = Math.log10(yMin);
    const hi = Math.log10(yMax);
    yOf = (v) => mt + ph - ((Math.log10(v) - lo) / (hi - lo || 1)) * ph;
    yTicks = decadeTicks(yMin, yMax);
  } else {
    const pad = (yMax - yMin || 1) * 0.05;
    const lo = yMin - pad;
    const hi = yMax + pad;
    yOf = (v) => mt + ph - ((v - lo) / (hi - lo || 1)) * ph;
    yTicks = niceTicks(lo, hi, 6);
  }

  let s = `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" font-family="Helvetica, Arial, sans-serif">\n`;
  s += `<rect width="${W}" height="${H}" fill="#fff"/>\n`;
  s += `<text x="${ml}" y="${mt - 16}" font-size="12" font-weight="600" fill="#222">${esc(opts.title)}</text>\n`;

  for (const v of yTicks) {
    const y = yOf(v);
    s += `<line x1="${ml}" y1="${y.toFixed(1)}" x2="${ml + pw}" y2="${y.toFixed(1)}" stroke="#eee" stroke-width="0.6"/>\n`;
    s += `<text x="${ml - 6}" y="${(y + 3).toFixed(1)}" text-anchor="end" font-size="9" fill="#555">${esc(fmtTick(v))}</text>\n`;
  }

  const xTicks = niceTicks(xMin, xMax, 7);
  for (const v of xTicks) {
    const x = xOf(v);
    s += `<line x1="${x.toFixed(1)}" y1="${mt + ph}" x2="${x.toFixed(1)}" y2="${mt + ph + 4}" stroke="#333" stroke-width="0.6"/>\n`;
    s += `<text x="${x.toFixed(1)}" y="${mt + ph + 15}" text-anchor="middle" font-size="9" fill="#555">${esc(fmtTick(v))}</text>\n`;
  }

  s += `<line x1="${ml}" y1="${mt}" x2="${ml}" y2="${mt + ph}" stroke="#333" stroke-width="0.8"/>\n`;
  s += `<line x1="${ml}" y1="${mt + ph}" x2="${ml + pw}" y2="${mt + ph}" stroke="#333" stroke-width="0.8"/>\n`;
  s += `<text x="${ml + pw / 2}" y="${H - 8}" text-anchor="middle" font-size="10" fill="#444">effective passes</text>\n`;
  s += `<text x="16" y="${mt + ph / 2}" text-anchor="middle" font-size="10" fill="#444" transform="rotate(-90,16,${mt + ph / 2})">${esc(opts.yLabel)}</text>\n`;

  drawable.forEach((curve, i) => {
    const color = PALETTE[i % PALETTE.length];
    const pts = curve.points
      .map((p) => `${xOf(p.passes).toFixed(2)},${yOf(p.y).toFixed(2)}`)
      .join(" ");
    const dataT = JSON.stringify(curve.points.map((p) => p.t));
    const dataPasses = JSON.stringify(curve.points.map((p) => p.passes));
    const dataY = JSON.stringify(curve.points.map((p) => p.y));
    s += `<polyline fill="none" stroke="${color}" stroke-width="1.4" points="${pts}" `;
    s += `data-scheme="${esc(curve.scheme)}" data-schedule="${esc(curve.schedule)}" `;
    s += `data-t="${esc(dataT)}" data-passes="${esc(dataPasses)}" data-y="${esc(dataY)}"/>\n`;
  });

  const lx = ml + pw + 12;
  drawable.forEach((curve, i) => {
    const color = PALETTE[i % PALETTE.length];
    const ly = mt + 10 + i * 16;
    s += `<line x1="${lx}" y1="${ly}" x2="${lx + 18}" y2="${ly}" stroke="${color}" stroke-width="1.6"/>\n`;
    s += `<text x="${lx + 23}" y="${ly + 3}" font-size="9.5" fill="#333">${esc(curve.label)}</text>\n`;
  });

  s += `</svg>\n`;
  return s;
}
