import { num } from "./bind";
import type { TableDocument } from "./types";

/** One payload table as HTML; every cell keeps its source path. */
export function renderTableDoc(doc: TableDocument, base: string): string {
  const head = doc.columns
    .map((col, j) => `<th>${num(`${base}.columns.${j}`, col)}</th>`)
    .join("");
  const body = doc.rows
    .map((row, i) => {
      const cells = row
        .map((cell, j) => `<td>${num(`${base}.rows.${i}.${j}`, cell)}</td>`)
        .join("");
      return `<tr>${cells}</tr>`;
    })
    .join("");
  return (
    `<table class="data-table"><caption>${num(`${base}.table`, doc.table)}</caption>` +
    `<thead><tr>${head}</tr></thead><tbody>${body}</tbody></table>`
  );
}
