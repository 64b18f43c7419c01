/**
 * Figure renderer CLI: `render <figure-spec.json>`.
 *
 * The spec names a figure id, its input CSVs (paths relative to the spec
 * file), and the SVG output path. Output is written atomically; any
 * validation or spot-check failure aborts before anything is written.
 */

import { mkdirSync, readFileSync, renameSync, writeFileSync } from "node:fs";
import * as path from "node:path";
import type { FigureSpec } from "./figures";
import { renderFigure } from "./figures";

export function main(argv: string[]): number {
  if (argv.length !== 2 || argv[0] !== "render") {
    process.stderr.write("usage: render <figure-spec.json>\n");
    return 2;
  }
  const specPath = argv[1];
  try {
    const spec = JSON.parse(readFileSync(specPath, "utf-8")) as FigureSpec;
    const baseDir = path.dirname(path.resolve(specPath));
    const result = renderFigure(spec, baseDir);
    const outPath = path.resolve(baseDir, spec.output);
    mkdirSync(path.dirname(outPath), { recursive: true });
    const tmpPath = `${outPath}.tmp`;
    writeFileSync(tmpPath, result.svg);
    renameSync(tmpPath, outPath);
    process.stdout.write(`${outPath}\n`);
    return 0;
  } catch (error) {
    process.stderr.write(`render failed: ${(error as Error).message}\n`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
