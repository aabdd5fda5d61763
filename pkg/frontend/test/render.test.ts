import * as fs from 'fs';
import * as os from 'os';
import * as path from 'path';
import { afterEach, beforeEach, describe, expect, it, vi } from 'vitest';
import { readBenchCsv } from '../src/csv';
import { buildChartOption, render } from '../src/render';

const BINARY_CSV = path.join(__dirname, 'fixtures', 'binary.csv');
const FLOWSPACE_CSV = path.join(__dirname, 'fixtures', 'flowspace.csv');

let tmpDir: string;

beforeEach(() => {
  tmpDir = fs.mkdtempSync(path.join(os.tmpdir(), 'plots-'));
  vi.spyOn(console, 'warn').mockImplementation(() => {});
});

afterEach(() => {
  fs.rmSync(tmpDir, { recursive: true, force: true });
  vi.restoreAllMocks();
});

function seriesNames(option: any): string[] {
  return (option.series as any[]).map((s) => s.name);
}

describe('readBenchCsv', () => {
  it('parses the bench columns', () => {
    const rows = readBenchCsv(BINARY_CSV);
    expect(rows.length).toBe(17);
    expect(rows[0].scheme).toBe('fb');
    expect(rows[16].k).toBeNull(); // ml_pdf row has a blank window column
  });

  it('rejects a foreign column set', () => {
    const bad = path.join(tmpDir, 'bad.csv');
    fs.writeFileSync(bad, 'scheme,k,value\nml_pdf,1,0.5\n');
    expect(() => readBenchCsv(bad)).toThrow(/unexpected CSV columns/);
  });

  it('reports malformed rows with their row number', () => {
    const bad = path.join(tmpDir, 'bad.csv');
    const header = fs.readFileSync(BINARY_CSV, 'utf8').split('\n')[0];
    fs.writeFileSync(bad, header + '\nml_pdf,,100,2,0.1,0.1,not_a_number,,0.1,1,\n');
    expect(() => readBenchCsv(bad)).toThrow(/row 2/);
  });
});

describe('error_vs_k', () => {
  it('renders one series per scheme with one point per k', () => {
    const out = path.join(tmpDir, 'error.svg');
    const option: any = render({ csvPath: BINARY_CSV, kind: 'error_vs_k', outPath: out });
    expect(seriesNames(option)).toEqual(['fb', 'gen_cude', 'cude', 'dude', 'ml_pdf']);
    for (const s of option.series) {
      expect(s.data.length).toBe(4); // k in {2,4,6,8}; ml_pdf replicated flat
    }
    expect(option.yAxis.max).toBe(1.2);
    const svg = fs.readFileSync(out, 'utf8');
    expect(svg.startsWith('<svg')).toBe(true);
  });

  it('is byte-stable across invocations', () => {
    const a = path.join(tmpDir, 'a.svg');
    const b = path.join(tmpDir, 'b.svg');
    render({ csvPath: BINARY_CSV, kind: 'error_vs_k', outPath: a });
    render({ csvPath: BINARY_CSV, kind: 'error_vs_k', outPath: b });
    expect(fs.readFileSync(a, 'utf8')).toBe(fs.readFileSync(b, 'utf8'));
  });

  it('honours the scheme filter', () => {
    const out = path.join(tmpDir, 'filtered.svg');
    const option: any = render({
      csvPath: BINARY_CSV,
      kind: 'error_vs_k',
      outPath: out,
      schemes: ['fb', 'gen_cude'],
    });
    expect(seriesNames(option)).toEqual(['fb', 'gen_cude']);
  });

  it('fails on an empty selection', () => {
    expect(() =>
      render({
        csvPath: BINARY_CSV,
        kind: 'error_vs_k',
        outPath: path.join(tmpDir, 'x.svg'),
        schemes: ['nonexistent'],
      })
    ).toThrow(/no rows/);
  });
});

describe('runtime_vs_k', () => {
  it('uses a logarithmic y axis', () => {
    const out = path.join(tmpDir, 'runtime.svg');
    const option: any = render({ csvPath: BINARY_CSV, kind: 'runtime_vs_k', outPath: out });
    expect(option.yAxis.type).toBe('log');
    expect(seriesNames(option).length).toBe(5);
    expect(fs.existsSync(out)).toBe(true);
  });
});

describe('similarity_bars', () => {
  it('renders one bar per row carrying a similarity value', () => {
    const out = path.join(tmpDir, 'sim.svg');
    const option: any = render({ csvPath: FLOWSPACE_CSV, kind: 'similarity_bars', outPath: out });
    expect(option.series[0].type).toBe('bar');
    expect(option.series[0].data.length).toBe(5); // failed fb rows drop out
    expect(option.xAxis.data).toContain('ml_pdf');
    expect(option.xAxis.data).toContain('gen_cude k=1');
  });

  it('warns about and skips failed cells', () => {
    render({
      csvPath: FLOWSPACE_CSV,
      kind: 'similarity_bars',
      outPath: path.join(tmpDir, 'sim.svg'),
    });
    const warnings = (console.warn as any).mock.calls.map((c: any[]) => c[0]);
    expect(warnings.some((w: string) => w.includes('fb'))).toBe(true);
  });

  it('rejects synthetic CSVs with an empty similarity column', () => {
    expect(() =>
      render({ csvPath: BINARY_CSV, kind: 'similarity_bars', outPath: path.join(tmpDir, 'x.svg') })
    ).toThrow(/similarity/);
  });
});

describe('buildChartOption', () => {
  it('never mutates its input rows', () => {
    const rows = readBenchCsv(BINARY_CSV).filter((r) => r.errorMessage === '');
    const snapshot = JSON.stringify(rows);
    buildChartOption(rows, 'error_vs_k');
    buildChartOption(rows, 'runtime_vs_k');
    expect(JSON.stringify(rows)).toBe(snapshot);
  });
});
