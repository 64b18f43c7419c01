/**
 * Reader for the manifest-stamped CSV files the tiedecay CLI emits.
 *
 * Layout: line 1 is "# " + a JSON manifest, line 2 the column header,
 * every further line one data row. Cells parse to numbers where possible
 * and stay strings otherwise.
 */

import { readFileSync } from "node:fs";

export interface Manifest {
  experiment: string;
  version: string;
  seed: number;
  config_sha256: string;
  params: Record<string, any>;
  realizations: number | null;
  analytics: Record<string, any>;
  columns: string[];
}

export type Cell = number | string;

export interface Dataset {
  manifest: Manifest;
  columns: string[];
  rows: Cell[][];
  source: string;
}

function parseCell(cell: string): Cell {
  if (cell === "") return "";
  const value = Number(cell);
  return Number.isNaN(value) ? cell : value;
}

export function parseCsv(text: string, source = "<memory>"): Dataset {
  const lines = text.split("\n");
  if (!lines[0] || !lines[0].startsWith("# ")) {
    throw new Error(`${source}: missing manifest header line`);
  }
  const manifest = JSON.parse(lines[0].slice(2)) as Manifest;
  if (lines.length < 2 || !lines[1]) {
    throw new Error(`${source}: missing column header`);
  }
  const columns = lines[1].split(",");
  const rows: Cell[][] = [];
  for (const line of lines.slice(2)) {
    if (!line) continue;
    const cells = line.split(",").map(parseCell);
    if (cells.length !== columns.length) {
      throw new Error(`${source}: row width ${cells.length} != ${columns.length}`);
    }
    rows.push(cells);
  }
  return { manifest, columns, rows, source };
}

export function loadCsv(path: string): Dataset {
  return parseCsv(readFileSync(path, "utf-8"), path);
}

export function columnIndex(ds: Dataset, name: string): number {
  const idx = ds.columns.indexOf(name);
  if (idx < 0) {
    throw new Error(`${ds.source}: no column '${name}' (have ${ds.columns.join(", ")})`);
  }
  return idx;
}

export function numericColumn(ds: Dataset, name: string): number[] {
  const idx = columnIndex(ds, name);
  return ds.rows.map((row, r) => {
    const cell = row[idx];
    if (typeof cell !== "number") {
      throw new Error(`${ds.source}: row ${r} column '${name}' is not numeric`);
    }
    return cell;
  });
}
