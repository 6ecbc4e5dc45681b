// Every value lifted from a service payload is rendered through one of
// these helpers, which tag the element with the dotted path it came from
// (data-src). Tests walk those tags to prove the client invents no numbers.

export function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function asText(value: unknown): string {
  return value === null || value === undefined ? "–" : String(value);
}

/** Payload value as an HTML span. */
export function num(path: string, value: unknown, cls = ""): string {
  const classAttr = cls ? ` class="${cls}"` : "";
  return `<span${classAttr} data-src="${path}">${escapeHtml(asText(value))}</span>`;
}

/** Payload value as an SVG tspan (spans are invalid inside <svg>). */
export function svgNum(path: string, value: unknown, cls = ""): string {
  const classAttr = cls ? ` class="${cls}"` : "";
  return `<tspan${classAttr} data-src="${path}">${escapeHtml(asText(value))}</tspan>`;
}
