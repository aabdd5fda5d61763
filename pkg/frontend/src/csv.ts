import * as fs from 'fs';
import Papa from 'papaparse';

export const CSV_COLUMNS = [
  'scheme',
  'k',
  'n',
  'M',
  'raw_error',
  'interior_error',
  'normalized_error',
  'similarity',
  'runtime_seconds',
  'seed',
  'error_message',
] as const;

export interface BenchRow {
  scheme: string;
  k: number | null;
  normalizedError: number | null;
  similarity: number | null;
  runtimeSeconds: number | null;
  errorMessage: string;
}

function parseNumber(raw: string, column: string, rowNumber: number): number | null {
  if (raw === '') return null;
  const value = Number(raw);
  if (!Number.isFinite(value)) {
    throw new Error(`row ${rowNumber}: bad ${column} value ${JSON.stringify(raw)}`);
  }
  return value;
}

/** Read a bench CSV, checking the exact column set the harness writes. */
export function readBenchCsv(path: string): BenchRow[] {
  const text = fs.readFileSync(path, 'utf8');
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  if (fields.length !== CSV_COLUMNS.length || !CSV_COLUMNS.every((c, i) => fields[i] === c)) {
    throw new Error(
      `unexpected CSV columns [${fields.join(', ')}]; expected [${CSV_COLUMNS.join(', ')}]`
    );
  }
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    const rowNumber = (e.row ?? 0) + 2; // 1-based, counting the header line
    throw new Error(`row ${rowNumber}: ${e.message}`);
  }
  return parsed.data.map((raw, i) => {
    const rowNumber = i + 2;
    for (const column of CSV_COLUMNS) {
      if (raw[column] === undefined) {
        throw new Error(`row ${rowNumber}: missing ${column} field`);
      }
    }
    return {
      scheme: raw.scheme,
      k: parseNumber(raw.k, 'k', rowNumber),
      normalizedError: parseNumber(raw.normalized_error, 'normalized_error', rowNumber),
      similarity: parseNumber(raw.similarity, 'similarity', rowNumber),
      runtimeSeconds: parseNumber(raw.runtime_seconds, 'runtime_seconds', rowNumber),
      errorMessage: raw.error_message,
    };
  });
}
