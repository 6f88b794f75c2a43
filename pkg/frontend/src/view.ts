/** Pure HTML generation for the console; DOM wiring lives in console.ts. */

import type { AnswerPayload, QueryResponse } from "./api.js";
import { formatElapsed, formatScore, segmentsFor } from "./highlight.js";

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

export function sentenceHtml(answer: AnswerPayload): string {
  return segmentsFor(answer.text, answer.spans)
    .map((seg) =>
      seg.marked ? `<mark>${escapeHtml(seg.text)}</mark>` : escapeHtml(seg.text),
    )
    .join("");
}

export function answerCard(answer: AnswerPayload): string {
  return (
    `<li class="answer">` +
    `<p class="sentence">${sentenceHtml(answer)}</p>` +
    `<p class="meta">` +
    `<span class="doc">${escapeHtml(answer.doc)}</span>` +
    `<span class="sent">sentence ${answer.sent}</span>` +
    `<span class="score">score ${formatScore(answer.score)}</span>` +
    `</p></li>`
  );
}

/** Answers render in server order; the client never reorders or rescores. */
export function resultsHtml(response: QueryResponse): string {
  if (response.answers.length === 0) {
    return `<p class="notice">No answers in the indexed documents.</p>`;
  }
  const cards = response.answers.map(answerCard).join("");
  return (
    `<ol class="answers">${cards}</ol>` +
    `<p class="elapsed">server time ${formatElapsed(response.elapsedMs)}</p>`
  );
}

export function diagnosticHtml(message: string): string {
  return `<p class="diagnostic">${escapeHtml(message)}</p>`;
}
