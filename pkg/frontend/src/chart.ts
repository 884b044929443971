/** SVG stacked-bar chart: one column per activity bucket, three segments each. */

import {
  ACTIVITY_KINDS,
  DAY_SECONDS,
  bucketTotal,
  isoDate,
  parseIso,
  type ActivityKind,
  type AnomalyDto,
  type BucketDto,
} from './types.js';

// Fixed palette, one color per activity across every view; a colorblind-safe
// alternative (Okabe-Ito) is provided as CSS custom properties in style.css.
export const ACTIVITY_COLORS: Record<ActivityKind, string> = {
  corrective: '#c8443c', // red family
  perfective: '#3e8e4f', // green family
  adaptive: '#3b6fbe', // blue family
};

export interface ChartLayout {
  width: number;
  height: number;
  marginLeft: number;
  marginRight: number;
  marginTop: number;
  marginBottom: number;
}

export const DEFAULT_LAYOUT: ChartLayout = {
  width: 860,
  height: 300,
  marginLeft: 48,
  marginRight: 12,
  marginTop: 18,
  marginBottom: 34,
};

export interface ChartHandlers {
  /** Drag selection snapped outward to whole buckets. */
  onZoomSelect(from: number, to: number): void;
  /** Double click: back to the full range. */
  onZoomReset(): void;
  /** Click on a segment with a nonzero count. */
  onSegmentClick(activity: ActivityKind, bucketStart: number): void;
}

const SVG_NS = 'http://www.w3.org/2000/svg';

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

function plotMetrics(layout: ChartLayout, columns: number) {
  const plotWidth = layout.width - layout.marginLeft - layout.marginRight;
  const plotHeight = layout.height - layout.marginTop - layout.marginBottom;
  return { plotWidth, plotHeight, columnWidth: plotWidth / columns };
}

/** Column index under an x pixel, clamped into [0, columns). */
export function columnAt(x: number, layout: ChartLayout, columns: number): number {
  const { columnWidth } = plotMetrics(layout, columns);
  const raw = Math.floor((x - layout.marginLeft) / columnWidth);
  return Math.min(columns - 1, Math.max(0, raw));
}

/**
 * Snap a pixel selection outward to whole buckets. Selections that stay
 * inside one column are sub-column noise and yield null (no-op).
 */
export function snapSelection(
  x0: number,
  x1: number,
  layout: ChartLayout,
  buckets: BucketDto[],
): { from: number; to: number } | null {
  if (buckets.length === 0) return null;
  const [lo, hi] = x0 <= x1 ? [x0, x1] : [x1, x0];
  const first = columnAt(lo, layout, buckets.length);
  const last = columnAt(hi, layout, buckets.length);
  if (first === last) return null;
  const from = parseIso(buckets[first].start);
  const to = parseIso(buckets[last].start) + buckets[last].width_days * DAY_SECONDS;
  return { from, to };
}

function ensureTooltip(container: HTMLElement): HTMLDivElement {
  let tip = container.querySelector<HTMLDivElement>('.chart-tooltip');
  if (!tip) {
    tip = document.createElement('div');
    tip.className = 'chart-tooltip';
    tip.style.display = 'none';
    container.appendChild(tip);
  }
  return tip;
}

export function renderChart(
  container: HTMLElement,
  buckets: BucketDto[],
  anomalies: AnomalyDto[],
  handlers: ChartHandlers,
  layout: ChartLayout = DEFAULT_LAYOUT,
): void {
  container.textContent = '';
  if (buckets.length === 0) {
    const empty = document.createElement('div');
    empty.className = 'chart-empty';
    empty.textContent = 'no activity in range';
    container.appendChild(empty);
    return;
  }

  const { plotHeight, columnWidth } = plotMetrics(layout, buckets.length);
  const maxTotal = Math.max(1, ...buckets.map(bucketTotal));
  const yScale = (count: number) => (count / maxTotal) * plotHeight;

  const svg = svgElement('svg', {
    class: 'chart',
    width: layout.width,
    height: layout.height,
    viewBox: `0 0 ${layout.width} ${layout.height}`,
  });
  container.appendChild(svg);
  const tooltip = ensureTooltip(container);

  // y axis: baseline, max line and label
  const baseY = layout.marginTop + plotHeight;
  svg.appendChild(svgElement('line', {
    class: 'axis', x1: layout.marginLeft, y1: baseY,
    x2: layout.width - layout.marginRight, y2: baseY,
  }));
  const maxLabel = svgElement('text', {
    class: 'axis-label', x: layout.marginLeft - 6, y: layout.marginTop + 4,
    'text-anchor': 'end',
  });
  maxLabel.textContent = String(maxTotal);
  svg.appendChild(maxLabel);

  const anomalousStarts = new Map(anomalies.map((a) => [a.bucket_start, a.kind]));
  const labelEvery = Math.max(1, Math.ceil(buckets.length / 8));

  buckets.forEach((bucket, index) => {
    const xSlot = layout.marginLeft + index * columnWidth;
    const barX = xSlot + columnWidth * 0.09;
    const barWidth = Math.max(1, columnWidth * 0.82);
    const bucketStart = parseIso(bucket.start);

    let stackTop = baseY;
    for (const kind of ACTIVITY_KINDS) {
      const count = bucket[kind];
      const height = yScale(count);
      stackTop -= height;
      const rect = svgElement('rect', {
        class: `segment segment-${kind}`,
        x: barX,
        y: stackTop,
        width: barWidth,
        height,
        fill: ACTIVITY_COLORS[kind],
        'data-activity': kind,
        'data-bucket-start': bucketStart,
        'data-count': count,
      });
      rect.addEventListener('click', () => {
        if (count > 0) handlers.onSegmentClick(kind, bucketStart);
      });
      rect.addEventListener('mouseenter', (event) => {
        tooltip.style.display = 'block';
        tooltip.textContent =
          `${isoDate(bucketStart)} · ${kind}: ${count} (bucket total ${bucketTotal(bucket)})`;
        tooltip.style.left = `${(event as MouseEvent).clientX + 12}px`;
        tooltip.style.top = `${(event as MouseEvent).clientY + 12}px`;
      });
      rect.addEventListener('mouseleave', () => {
        tooltip.style.display = 'none';
      });
      svg.appendChild(rect);
    }

    const anomaly = anomalousStarts.get(bucket.start);
    if (anomaly) {
      const marker = svgElement('text', {
        class: `anomaly anomaly-${anomaly}`,
        x: xSlot + columnWidth / 2,
        y: layout.marginTop - 4,
        'text-anchor': 'middle',
      });
      marker.textContent = anomaly === 'peak' ? '▲' : '▼';
      svg.appendChild(marker);
    }

    if (index % labelEvery === 0) {
      const label = svgElement('text', {
        class: 'axis-label',
        x: xSlot + columnWidth / 2,
        y: layout.height - layout.marginBottom + 16,
        'text-anchor': 'middle',
      });
      label.textContent = isoDate(bucketStart);
      svg.appendChild(label);
    }
  });

  attachZoomGestures(svg, buckets, handlers, layout);
}

function attachZoomGestures(
  svg: SVGSVGElement,
  buckets: BucketDto[],
  handlers: ChartHandlers,
  layout: ChartLayout,
): void {
  let dragStart: number | null = null;
  let selectionRect: SVGRectElement | null = null;

  const localX = (event: MouseEvent) => event.clientX - svg.getBoundingClientRect().left;

  svg.addEventListener('mousedown', (event) => {
    dragStart = localX(event as MouseEvent);
    selectionRect = svgElement('rect', {
      class: 'zoom-selection',
      x: dragStart,
      y: layout.marginTop,
      width: 0,
      height: layout.height - layout.marginTop - layout.marginBottom,
    });
    svg.appendChild(selectionRect);
  });

  svg.addEventListener('mousemove', (event) => {
    if (dragStart === null || !selectionRect) return;
    const x = localX(event as MouseEvent);
    selectionRect.setAttribute('x', String(Math.min(dragStart, x)));
    selectionRect.setAttribute('width', String(Math.abs(x - dragStart)));
  });

  svg.addEventListener('mouseup', (event) => {
    if (dragStart === null) return;
    const x = localX(event as MouseEvent);
    selectionRect?.remove();
    const snapped = snapSelection(dragStart, x, layout, buckets);
    dragStart = null;
    selectionRect = null;
    if (snapped) handlers.onZoomSelect(snapped.from, snapped.to);
  });

  svg.addEventListener('dblclick', () => {
    handlers.onZoomReset();
  });
}

/** Legend entries with the fixed activity colors, shared by every view. */
export function renderLegend(container: HTMLElement): void {
  container.textContent = '';
  for (const kind of ACTIVITY_KINDS) {
    const entry = document.createElement('span');
    entry.className = 'legend-entry';
    const swatch = document.createElement('span');
    swatch.className = 'legend-swatch';
    swatch.style.backgroundColor = ACTIVITY_COLORS[kind];
    entry.appendChild(swatch);
    entry.appendChild(document.createTextNode(kind));
    container.appendChild(entry);
  }
}
