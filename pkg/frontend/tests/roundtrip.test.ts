/** Full round trip against a really-served fixture store.
 *
 * Builds a store with the CLI, serves it with the built UI bundle, then
 * drives the page's own rendering path on the live /query payload.  The
 * whole trip, including service startup, must finish inside 30 seconds.
 */

import { execFile, spawn, type ChildProcess } from "node:child_process";
import { mkdtemp, rm } from "node:fs/promises";
import { tmpdir } from "node:os";
import path from "node:path";
import { fileURLToPath } from "node:url";
import { promisify } from "node:util";

import { Window } from "happy-dom";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { AskClient } from "../src/api.js";
import { resultsHtml } from "../src/view.js";

const run = promisify(execFile);
const CLI = process.env.ASKMAN_BIN ?? "askman";
const DIST = fileURLToPath(new URL("../dist", import.meta.url));

let baseUrl = "";
let workDir = "";
let child: ChildProcess | undefined;
const startedAt = Date.now();

function waitForServing(proc: ChildProcess): Promise<string> {
  return new Promise((resolve, reject) => {
    let seen = "";
    const timer = setTimeout(
      () => reject(new Error(`service never came up; output: ${seen}`)),
      20_000,
    );
    proc.stdout!.on("data", (chunk: Buffer) => {
      seen += chunk.toString();
      const match = seen.match(/serving on (http:\/\/[\w.]+:\d+)/);
      if (match) {
        clearTimeout(timer);
        resolve(match[1]!);
      }
    });
    proc.on("exit", (code) => {
      clearTimeout(timer);
      reject(new Error(`service exited early (${code}); output: ${seen}`));
    });
  });
}

beforeAll(async () => {
  workDir = await mkdtemp(path.join(tmpdir(), "askman-ui-"));
  await run(CLI, ["fixtures", "--out", path.join(workDir, "fx")]);
  await run(CLI, [
    "index",
    "--corpus",
    path.join(workDir, "fx", "corpus"),
    "--store",
    path.join(workDir, "store"),
  ]);
  child = spawn(CLI, [
    "serve",
    "--store",
    path.join(workDir, "store"),
    "--port",
    "0",
    "--ui",
    DIST,
  ]);
  baseUrl = await waitForServing(child);
});

afterAll(async () => {
  child?.kill();
  if (workDir) await rm(workDir, { recursive: true, force: true });
});

describe("served console round trip", () => {
  it("serves the built page and reports a healthy store", async () => {
    const page = await fetch(`${baseUrl}/`);
    expect(page.status).toBe(200);
    const html = await page.text();
    expect(html).toContain('id="ask-form"');
    expect(html).toContain('src="./main.js"');

    const bundle = await fetch(`${baseUrl}/main.js`);
    expect(bundle.status).toBe(200);

    const health = await new AskClient(baseUrl).health();
    expect(health).toEqual({ status: "ok", docs: 30 });
  });

  it("answers the flagship question with highlighted phrases", async () => {
    const client = new AskClient(baseUrl);
    const response = await client.query("which command erases files?", "external");

    expect(response.answers.length).toBeGreaterThan(0);
    const top = response.answers[0]!;
    expect(top.doc).toBe("rm");
    expect(top.sent).toBe(0);
    expect(top.score).toBe(1.0);

    // Render through the page's own pipeline and inspect the DOM.
    const window = new Window();
    const container = window.document.createElement("section");
    container.innerHTML = resultsHtml(response);

    const card = container.querySelector(".answer")!;
    const marks = [...card.querySelectorAll("mark")].map((m) => m.textContent);
    expect(marks.join(" ")).toContain("rm");
    expect(marks.join(" ")).toContain("removes");
    expect(marks.join(" ")).toContain("files");
    expect(card.querySelector(".score")!.textContent).toBe("score 1.00");

    // Emphasized plus plain segments reconcatenate to the server sentence.
    expect(card.querySelector(".sentence")!.textContent).toBe(top.text);
  });

  it("finished inside the thirty second budget", () => {
    expect(Date.now() - startedAt).toBeLessThan(30_000);
  });
});
