import * as fs from 'fs';
import * as echarts from 'echarts';
import { BenchRow, readBenchCsv } from './csv';

export type FigureKind = 'error_vs_k' | 'runtime_vs_k' | 'similarity_bars';

export interface PlotSpec {
  csvPath: string;
  kind: FigureKind;
  outPath: string;
  schemes?: string[]; // optional filter
}

const WIDTH = 860;
const HEIGHT = 540;

function selectRows(rows: BenchRow[], schemes?: string[]): BenchRow[] {
  let selected = rows;
  if (schemes && schemes.length > 0) {
    selected = selected.filter((r) => schemes.includes(r.scheme));
  }
  const failed = selected.filter((r) => r.errorMessage !== '');
  for (const r of failed) {
    console.warn(`skipping failed cell ${r.scheme} k=${r.k ?? '-'}: ${r.errorMessage}`);
  }
  return selected.filter((r) => r.errorMessage === '');
}

function schemeOrder(rows: BenchRow[]): string[] {
  const seen: string[] = [];
  for (const r of rows) {
    if (!seen.includes(r.scheme)) seen.push(r.scheme);
  }
  return seen;
}

function lineChartOption(
  rows: BenchRow[],
  value: (r: BenchRow) => number | null,
  yName: string,
  yAxis: echarts.EChartsOption['yAxis']
): echarts.EChartsOption {
  const withValue = rows.filter((r) => value(r) !== null);
  const kValues = [...new Set(withValue.filter((r) => r.k !== null).map((r) => r.k as number))].sort(
    (a, b) => a - b
  );
  if (withValue.length === 0 || kValues.length === 0) {
    throw new Error(`no rows with both a window size and a ${yName} value`);
  }
  const series: echarts.SeriesOption[] = [];
  for (const scheme of schemeOrder(withValue)) {
    const own = withValue.filter((r) => r.scheme === scheme);
    let points: [number, number][];
    if (own.every((r) => r.k === null)) {
      // window-free schemes (ml_pdf) render as a flat reference line
      const v = value(own[0]) as number;
      points = kValues.map((k) => [k, v]);
    } else {
      points = own
        .filter((r) => r.k !== null)
        .sort((a, b) => (a.k as number) - (b.k as number))
        .map((r) => [r.k as number, value(r) as number]);
    }
    series.push({ name: scheme, type: 'line', data: points, symbolSize: 7 });
  }
  return {
    animation: false,
    legend: { top: 8 },
    grid: { left: 70, right: 30, top: 48, bottom: 55 },
    xAxis: { type: 'value', name: 'window size k', nameLocation: 'middle', nameGap: 32, minInterval: 1 },
    yAxis,
    series,
  };
}

export function buildChartOption(rows: BenchRow[], kind: FigureKind): echarts.EChartsOption {
  switch (kind) {
    case 'error_vs_k':
      return lineChartOption(rows, (r) => r.normalizedError, 'normalized_error', {
        type: 'value',
        name: 'normalized error',
        min: 0,
        max: 1.2,
      });
    case 'runtime_vs_k':
      return lineChartOption(rows, (r) => r.runtimeSeconds, 'runtime_seconds', {
        type: 'log',
        name: 'runtime (s)',
      });
    case 'similarity_bars': {
      const withSim = rows.filter((r) => r.similarity !== null);
      if (withSim.length === 0) {
        throw new Error('no rows carry a similarity value (synthetic CSVs do not)');
      }
      const labels = withSim.map((r) => (r.k === null ? r.scheme : `${r.scheme} k=${r.k}`));
      return {
        animation: false,
        grid: { left: 70, right: 30, top: 30, bottom: 80 },
        xAxis: { type: 'category', data: labels, axisLabel: { rotate: 35 } },
        yAxis: { type: 'value', name: 'similarity', min: 0, max: 1 },
        series: [{ type: 'bar', data: withSim.map((r) => r.similarity as number) }],
      };
    }
  }
}

/** Renumber the renderer's per-process counter-based class names so repeated
 * invocations emit identical bytes. */
function stabilizeSvgIds(svg: string): string {
  const mapping = new Map<string, string>();
  return svg
    .replace(/zr\d+-cls-\d+/g, (name) => {
      if (!mapping.has(name)) {
        mapping.set(name, `zr-cls-${mapping.size}`);
      }
      return mapping.get(name) as string;
    })
    .replace(/\bzr\d+-/g, 'zr-');
}

export function renderSvg(option: echarts.EChartsOption): string {
  const chart = echarts.init(null, null, {
    renderer: 'svg',
    ssr: true,
    width: WIDTH,
    height: HEIGHT,
  });
  chart.setOption(option);
  const svg = chart.renderToSVGString();
  chart.dispose();
  return stabilizeSvgIds(svg);
}

/** Render one figure; returns the chart option for inspection. */
export function render(spec: PlotSpec): echarts.EChartsOption {
  const rows = selectRows(readBenchCsv(spec.csvPath), spec.schemes);
  if (rows.length === 0) {
    throw new Error('no rows survive the scheme filter');
  }
  const option = buildChartOption(rows, spec.kind);
  fs.writeFileSync(spec.outPath, renderSvg(option));
  return option;
}
