/**
 * Minimal hand-rolled SVG scatter/line rendering: linear scales, axes with
 * ticks, polylines with markers, and error bars on both axes.  No DOM, no
 * dependencies; the output is a standalone SVG string.
 */

export interface PlotPoint {
  x: number;
  y: number;
  xErr: number;
  yErr: number;
}

export interface Series {
  label: string;
  points: PlotPoint[];
}

export interface FigureLayout {
  width: number;
  height: number;
  title: string;
  xLabel: string;
  yLabel: string;
}

const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#e377c2", "#17becf",
];

const MARGIN = { left: 64, right: 16, top: 34, bottom: 46 };

interface Scale {
  (v: number): number;
}

function linearScale(lo: number, hi: number, rLo: number, rHi: number): Scale {
  const span = hi - lo || 1.0;
  return (v: number) => rLo + ((v - lo) / span) * (rHi - rLo);
}

function niceTicks(lo: number, hi: number, n = 6): number[] {
  const span = hi - lo || 1.0;
  const rawStep = span / Math.max(n - 1, 1);
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= n) ?? mag * 10;
  const first = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = first; v <= hi + 1e-9 * span; v += step) ticks.push(v);
  return ticks;
}

function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 10000 || a < 0.01) return v.toExponential(1);
  return String(Number(v.toPrecision(6)));
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function extent(series: Series[], get: (p: PlotPoint) => number,
                err: (p: PlotPoint) => number): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const s of series) {
    for (const p of s.points) {
      lo = Math.min(lo, get(p) - err(p));
      hi = Math.max(hi, get(p) + err(p));
    }
  }
  if (!Number.isFinite(lo) || !Number.isFinite(hi)) {
    lo = 0;
    hi = 1;
  }
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const pad = 0.04 * (hi - lo);
  return [lo - pad, hi + pad];
}

/** Render series into a complete SVG document with a machine-readable
 * data island (<metadata id="series-data">) holding the exact points. */
export function renderFigure(series: Series[], layout: FigureLayout): string {
  const { width, height } = layout;
  const [xLo, xHi] = extent(series, (p) => p.x, (p) => p.xErr);
  const [yLo, yHi] = extent(series, (p) => p.y, (p) => p.yErr);
  const sx = linearScale(xLo, xHi, MARGIN.left, width - MARGIN.right);
  const sy = linearScale(yLo, yHi, height - MARGIN.bottom, MARGIN.top);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="11">`,
  );
  parts.push(`<metadata id="series-data">${esc(JSON.stringify(series))}</metadata>`);
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);

  // axes and ticks
  const axisY = height - MARGIN.bottom;
  parts.push(`<g stroke="#333" stroke-width="1">`);
  parts.push(`<line x1="${MARGIN.left}" y1="${axisY}" x2="${width - MARGIN.right}" y2="${axisY}"/>`);
  parts.push(`<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" y2="${axisY}"/>`);
  parts.push(`</g>`);
  for (const t of niceTicks(xLo, xHi)) {
    const x = sx(t);
    parts.push(`<line x1="${x}" y1="${axisY}" x2="${x}" y2="${axisY + 4}" stroke="#333"/>`);
    parts.push(`<text x="${x}" y="${axisY + 16}" text-anchor="middle">${fmtTick(t)}</text>`);
  }
  for (const t of niceTicks(yLo, yHi)) {
    const y = sy(t);
    parts.push(`<line x1="${MARGIN.left - 4}" y1="${y}" x2="${MARGIN.left}" y2="${y}" stroke="#333"/>`);
    parts.push(`<text x="${MARGIN.left - 7}" y="${y + 3}" text-anchor="end">${fmtTick(t)}</text>`);
  }
  parts.push(
    `<text x="${(MARGIN.left + width - MARGIN.right) / 2}" y="${height - 10}" ` +
    `text-anchor="middle">${esc(layout.xLabel)}</text>`,
  );
  parts.push(
    `<text x="14" y="${(MARGIN.top + axisY) / 2}" text-anchor="middle" ` +
    `transform="rotate(-90 14 ${(MARGIN.top + axisY) / 2})">${esc(layout.yLabel)}</text>`,
  );
  parts.push(
    `<text x="${width / 2}" y="18" text-anchor="middle" font-size="13">` +
    `${esc(layout.title)}</text>`,
  );

  series.forEach((s, si) => {
    const color = PALETTE[si % PALETTE.length];
    parts.push(`<g stroke="${color}" fill="none" stroke-width="1.4">`);
    if (s.points.length > 1) {
      const path = s.points.map((p) => `${sx(p.x)},${sy(p.y)}`).join(" ");
      parts.push(`<polyline points="${path}"/>`);
    }
    for (const p of s.points) {
      if (p.xErr > 0) {
        parts.push(
          `<line x1="${sx(p.x - p.xErr)}" y1="${sy(p.y)}" ` +
          `x2="${sx(p.x + p.xErr)}" y2="${sy(p.y)}"/>`,
        );
      }
      if (p.yErr > 0) {
        parts.push(
          `<line x1="${sx(p.x)}" y1="${sy(p.y - p.yErr)}" ` +
          `x2="${sx(p.x)}" y2="${sy(p.y + p.yErr)}"/>`,
        );
      }
    }
    parts.push(`</g>`);
    for (const p of s.points) {
      parts.push(`<circle cx="${sx(p.x)}" cy="${sy(p.y)}" r="2.6" fill="${PALETTE[si % PALETTE.length]}"/>`);
    }
    const lx = width - MARGIN.right - 120;
    const ly = MARGIN.top + 14 * si;
    parts.push(`<line x1="${lx}" y1="${ly}" x2="${lx + 18}" y2="${ly}" stroke="${color}" stroke-width="2"/>`);
    parts.push(`<text x="${lx + 23}" y="${ly + 3}">${esc(s.label)}</text>`);
  });

  parts.push(`</svg>`);
  return parts.join("\n");
}

/** Recover the exact plotted point sets from a rendered SVG document. */
export function extractSeries(svg: string): Series[] {
  const match = svg.match(/<metadata id="series-data">([\s\S]*?)<\/metadata>/);
  if (!match) {
    throw new Error("no series-data metadata island found in SVG");
  }
  const json = match[1]
    .replace(/&lt;/g, "<")
    .replace(/&gt;/g, ">")
    .replace(/&amp;/g, "&");
  return JSON.parse(json) as Series[];
}
