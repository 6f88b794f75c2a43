/** Splitting server sentences into emphasized and plain segments.
 *
 * The server owns tokenization, ranking, and span computation; this module
 * only slices text at the received offsets.  The one invariant that matters:
 * concatenating the returned segments always reproduces the input exactly.
 */

export interface Segment {
  text: string;
  marked: boolean;
}

export type Span = readonly [number, number];

function wellFormed(text: string, spans: readonly Span[]): boolean {
  let last = 0;
  for (const [start, end] of spans) {
    if (!Number.isInteger(start) || !Number.isInteger(end)) return false;
    if (start < last || end <= start || end > text.length) return false;
    last = end;
  }
  return true;
}

/** Cut text into alternating plain/marked segments at the span boundaries.
 *
 * Malformed ranges (out of bounds, unsorted, overlapping) are a server bug;
 * per the defensive contract the text renders unhighlighted and a warning is
 * logged rather than throwing at the user.
 */
export function segmentsFor(text: string, spans: readonly Span[]): Segment[] {
  if (!wellFormed(text, spans)) {
    console.warn("dropping malformed highlight spans", spans);
    return text ? [{ text, marked: false }] : [];
  }
  const out: Segment[] = [];
  let pos = 0;
  for (const [start, end] of spans) {
    if (start > pos) out.push({ text: text.slice(pos, start), marked: false });
    out.push({ text: text.slice(start, end), marked: true });
    pos = end;
  }
  if (pos < text.length) out.push({ text: text.slice(pos), marked: false });
  return out;
}

export function formatScore(score: number): string {
  return score.toFixed(2);
}

export function formatElapsed(elapsedMs: number): string {
  return `${elapsedMs.toFixed(1)} ms`;
}
