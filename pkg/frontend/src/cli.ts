#!/usr/bin/env node
import yargs from 'yargs';
import { hideBin } from 'yargs/helpers';
import { FigureKind, render } from './render';

const argv = yargs(hideBin(process.argv))
  .option('csv', { type: 'string', demandOption: true, describe: 'bench CSV path' })
  .option('kind', {
    choices: ['error_vs_k', 'runtime_vs_k', 'similarity_bars'] as const,
    demandOption: true,
  })
  .option('out', { type: 'string', demandOption: true, describe: 'output SVG path' })
  .option('schemes', { type: 'string', describe: 'comma-separated scheme filter' })
  .strict()
  .parseSync();

try {
  render({
    csvPath: argv.csv,
    kind: argv.kind as FigureKind,
    outPath: argv.out,
    schemes: argv.schemes ? argv.schemes.split(',').map((s) => s.trim()) : undefined,
  });
  console.log(`wrote ${argv.out}`);
} catch (e) {
  console.error(`error: ${(e as Error).message}`);
  process.exit(1);
}
