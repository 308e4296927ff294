/** Paired-bar distribution chart with reference levels, rendered as SVG.
 *
 * The geometry is computed by pure functions so tests can assert that every
 * rendered coordinate derives from the API bundle without any rescoring.
 */

import type { ChartBundle } from "./api.js";

export interface BarGeometry {
  d: number;
  name: string;
  kind: "agreement" | "likelihood";
  value: number;
  x: number;
  y: number;
  width: number;
  height: number;
}

export interface ReferenceLineGeometry {
  label: string;
  value: number;
  y: number;
}

export interface ChartLayout {
  width: number;
  height: number;
  plot: { left: number; right: number; top: number; bottom: number };
  baselineY: number;
  bars: BarGeometry[];
  referenceLines: ReferenceLineGeometry[];
  ticks: { value: number; y: number }[];
  valueToY(value: number): number;
}

const MARGIN = { left: 44, right: 120, top: 16, bottom: 28 };

export function layoutChart(
  bundle: ChartBundle, width = 640, height = 320,
): ChartLayout {
  const values = bundle.bars.flatMap((bar) =>
    bar.likelihood_pct === null
      ? [bar.agreement_pct]
      : [bar.agreement_pct, bar.likelihood_pct]);
  if (bundle.reference) {
    values.push(bundle.reference.mean_plus_2sigma_pct);
  }
  const maxValue = Math.max(100, ...values);
  const minValue = Math.min(0, ...values);
  const plot = {
    left: MARGIN.left,
    right: width - MARGIN.right,
    top: MARGIN.top,
    bottom: height - MARGIN.bottom,
  };
  const scale = (plot.bottom - plot.top) / (maxValue - minValue);
  const valueToY = (value: number) => plot.bottom - (value - minValue) * scale;

  const n = bundle.bars.length;
  const slot = (plot.right - plot.left) / Math.max(n, 1);
  const barWidth = Math.max(2, slot * 0.33);
  const bars: BarGeometry[] = [];
  bundle.bars.forEach((bar, index) => {
    const center = plot.left + slot * (index + 0.5);
    const series: [number, "agreement" | "likelihood", number | null][] = [
      [center - barWidth, "agreement", bar.agreement_pct],
      [center, "likelihood", bar.likelihood_pct],
    ];
    for (const [x, kind, value] of series) {
      if (value === null) continue;
      const y0 = valueToY(Math.max(value, 0));
      const y1 = valueToY(Math.min(value, 0));
      bars.push({
        d: bar.d, name: bar.name, kind, value,
        x, y: y0, width: barWidth, height: Math.max(y1 - y0, 0),
      });
    }
  });

  const referenceLines: ReferenceLineGeometry[] = [];
  if (bundle.reference) {
    referenceLines.push(
      { label: "mean", value: bundle.reference.mean_pct,
        y: valueToY(bundle.reference.mean_pct) },
      { label: "mean+1σ", value: bundle.reference.mean_plus_sigma_pct,
        y: valueToY(bundle.reference.mean_plus_sigma_pct) },
      { label: "mean+2σ", value: bundle.reference.mean_plus_2sigma_pct,
        y: valueToY(bundle.reference.mean_plus_2sigma_pct) },
    );
  }

  const ticks = [];
  for (let value = 0; value <= maxValue; value += 25) {
    ticks.push({ value, y: valueToY(value) });
  }

  return {
    width, height, plot, baselineY: valueToY(0),
    bars, referenceLines, ticks, valueToY,
  };
}

const SVG_NS = "http://www.w3.org/2000/svg";

function svgElement<K extends keyof SVGElementTagNameMap>(
  doc: Document, tag: K, attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const node = doc.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  return node;
}

export function renderChart(
  bundle: ChartBundle, doc: Document = document, width = 640, height = 320,
): SVGSVGElement {
  const layout = layoutChart(bundle, width, height);
  const svg = svgElement(doc, "svg", {
    width: layout.width, height: layout.height,
    viewBox: `0 0 ${layout.width} ${layout.height}`,
    class: "distribution-chart", role: "img",
  });

  for (const tick of layout.ticks) {
    svg.appendChild(svgElement(doc, "line", {
      x1: layout.plot.left, x2: layout.plot.right,
      y1: tick.y, y2: tick.y, class: "tick-line",
    }));
    const label = svgElement(doc, "text", {
      x: layout.plot.left - 6, y: tick.y + 4,
      "text-anchor": "end", class: "tick-label",
    });
    label.textContent = `${tick.value}`;
    svg.appendChild(label);
  }

  for (const bar of layout.bars) {
    const rect = svgElement(doc, "rect", {
      x: bar.x, y: bar.y, width: bar.width, height: bar.height,
      class: `bar bar-${bar.kind}`, "data-d": bar.d, "data-kind": bar.kind,
      "data-value": bar.value,
    });
    const title = doc.createElementNS(SVG_NS, "title");
    title.textContent = `${bar.name}: ${bar.kind} ${bar.value.toFixed(1)}%`;
    rect.appendChild(title);
    svg.appendChild(rect);
  }

  for (const line of layout.referenceLines) {
    svg.appendChild(svgElement(doc, "line", {
      x1: layout.plot.left, x2: layout.plot.right,
      y1: line.y, y2: line.y,
      class: "reference-line", "data-label": line.label, "data-value": line.value,
    }));
    const text = svgElement(doc, "text", {
      x: layout.plot.right + 6, y: line.y + 4, class: "reference-label",
    });
    text.textContent = `${line.label} ${line.value.toFixed(1)}%`;
    svg.appendChild(text);
  }

  svg.appendChild(svgElement(doc, "line", {
    x1: layout.plot.left, x2: layout.plot.right,
    y1: layout.baselineY, y2: layout.baselineY, class: "baseline",
  }));

  const n = bundle.bars.length;
  const slot = (layout.plot.right - layout.plot.left) / Math.max(n, 1);
  bundle.bars.forEach((bar, index) => {
    const label = svgElement(doc, "text", {
      x: layout.plot.left + slot * (index + 0.5),
      y: layout.plot.bottom + 16, "text-anchor": "middle", class: "axis-label",
    });
    label.textContent = `${bar.d}`;
    const title = doc.createElementNS(SVG_NS, "title");
    title.textContent = bar.name;
    label.appendChild(title);
    svg.appendChild(label);
  });

  return svg;
}
