/**
 * Data-integrity checksums.
 *
 * A figure's plotted-data checksum is computed over the rows its builder
 * actually turned into marks, in the order they were consumed; it must
 * equal the checksum of the input CSV's data section, proving the renderer
 * neither dropped, reordered, nor altered any value.
 */

import { createHash } from "node:crypto";
import type { Cell, Dataset } from "./csv";

export function canonicalCell(cell: Cell): string {
  return typeof cell === "number" ? String(cell) : cell;
}

export function checksumRows(rows: ReadonlyArray<ReadonlyArray<Cell>>): string {
  const hash = createHash("sha256");
  for (const row of rows) {
    hash.update(row.map(canonicalCell).join(","));
    hash.update("\n");
  }
  return hash.digest("hex");
}

export function datasetChecksum(ds: Dataset): string {
  return checksumRows(ds.rows);
}
