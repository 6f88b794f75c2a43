/** Wires the query form to the service client.
 *
 * One query is in flight at a time: a new submit aborts the previous
 * request and stale responses are never rendered.  Parse failures show an
 * inline diagnostic in the result area; transport failures show a retry
 * banner and leave the previous results on screen.
 */

import { ApiError, type Mode, type QueryClient } from "./api.js";
import { diagnosticHtml, resultsHtml } from "./view.js";

interface ConsoleElements {
  form: HTMLFormElement;
  question: HTMLInputElement;
  mode: HTMLSelectElement;
  submit: HTMLButtonElement;
  results: HTMLElement;
  banner: HTMLElement;
  bannerText: HTMLElement;
  retry: HTMLButtonElement;
  status: HTMLElement;
}

function grab(root: Document): ConsoleElements {
  const byId = <T extends HTMLElement>(id: string): T => {
    const el = root.getElementById(id);
    if (!el) throw new Error(`console page is missing #${id}`);
    return el as T;
  };
  return {
    form: byId<HTMLFormElement>("ask-form"),
    question: byId<HTMLInputElement>("question"),
    mode: byId<HTMLSelectElement>("mode"),
    submit: byId<HTMLButtonElement>("submit"),
    results: byId<HTMLElement>("results"),
    banner: byId<HTMLElement>("banner"),
    bannerText: byId<HTMLElement>("banner-text"),
    retry: byId<HTMLButtonElement>("retry"),
    status: byId<HTMLElement>("status"),
  };
}

export function wireConsole(root: Document, client: QueryClient): void {
  const el = grab(root);
  let ticket = 0;
  let controller: AbortController | null = null;

  const syncSubmit = () => {
    el.submit.disabled = el.question.value.trim() === "";
  };
  el.question.addEventListener("input", syncSubmit);
  syncSubmit();

  const run = async () => {
    const question = el.question.value.trim();
    if (!question) return;
    controller?.abort();
    controller = new AbortController();
    const mine = ++ticket;
    el.banner.hidden = true;
    el.status.textContent = "searching";
    try {
      const response = await client.query(
        question,
        el.mode.value as Mode,
        controller.signal,
      );
      if (mine !== ticket) return;
      el.results.innerHTML = resultsHtml(response);
      el.status.textContent = `${response.answers.length} answer${
        response.answers.length === 1 ? "" : "s"
      }`;
    } catch (err) {
      if (mine !== ticket) return;
      if (err instanceof ApiError && err.status === 400) {
        el.results.innerHTML = diagnosticHtml(
          err.code === "unparseable_query"
            ? "That question could not be parsed. Try a plainer phrasing like \"which command removes files?\"."
            : "The service rejected the request.",
        );
        el.status.textContent = "";
        return;
      }
      if (err instanceof DOMException && err.name === "AbortError") {
        return; // superseded by a newer submit
      }
      // Transport trouble or a server fault: keep whatever is on screen.
      el.bannerText.textContent =
        err instanceof ApiError
          ? `The service failed (${err.code}).`
          : "The service is unreachable.";
      el.banner.hidden = false;
      el.status.textContent = "";
    }
  };

  el.form.addEventListener("submit", (event) => {
    event.preventDefault();
    void run();
  });
  el.retry.addEventListener("click", () => {
    void run();
  });

  client
    .health()
    .then((health) => {
      el.status.textContent = `${health.docs} documents indexed`;
    })
    .catch(() => {
      el.bannerText.textContent = "The service is unreachable.";
      el.banner.hidden = false;
    });
}
