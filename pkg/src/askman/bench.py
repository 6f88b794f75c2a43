"""Benchmark harness comparing storage modes across corpus sizes.

Indexes a small and a large corpus, then times every query in three
configurations: internal mode on the small store (a), external mode on the
small store (b), and external mode on the large store (c).  Each timing is
the median of a fixed number of repetitions after two warmup runs, covering
question parsing through ranked-answer production.

Besides timing, the harness asserts that (a) and (b) return the same
(docId, sentId) answer sets, and that every (b) answer reappears in (c).
The report is written as JSON next to a delimited table and a rendered
figure, so runs can be diffed, post-processed, or eyeballed.
"""

from __future__ import annotations

import json
import statistics
import tempfile
import time
from pathlib import Path

from .engine import AnswerEngine
from .store import EXTERNAL, INTERNAL, CorpusStore

WARMUPS = 2


def _corpus_bytes(corpus_dir: str | Path) -> int:
    return sum(p.stat().st_size for p in Path(corpus_dir).glob("*.txt"))


def _build_store(corpus_dir: str | Path, root: Path, lexicon: str, concepts: str) -> CorpusStore:
    store = CorpusStore.create(root, lexicon, concepts)
    for path in sorted(Path(corpus_dir).glob("*.txt")):
        store.ingest_document(path.stem, path.read_text(encoding="utf-8"))
    store.save_index()
    return store


def _timed_answers(engine: AnswerEngine, question: str, mode: str, reps: int):
    """Median wall-clock ms over reps runs, plus the (docId, sentId) set."""
    answers = []
    for _ in range(WARMUPS):
        answers = engine.answer(question, mode=mode)
    samples = []
    for _ in range(reps):
        started = time.perf_counter()
        answers = engine.answer(question, mode=mode)
        samples.append((time.perf_counter() - started) * 1000.0)
    return statistics.median(samples), {(a.doc_id, a.sent_id) for a in answers}


def run_bench(
    small_corpus: str | Path,
    large_corpus: str | Path,
    queries_path: str | Path,
    reps: int = 9,
    lexicon_path: str | None = None,
    concepts_path: str | None = None,
    work_dir: str | Path | None = None,
) -> dict:
    from .cli import _data_path  # default packaged lexicons

    lexicon = lexicon_path or _data_path("lexicon.tsv")
    concepts = concepts_path or _data_path("concepts.tsv")
    work = Path(work_dir) if work_dir else Path(tempfile.mkdtemp(prefix="askman-bench-"))
    work.mkdir(parents=True, exist_ok=True)

    small_store = _build_store(small_corpus, work / "small-store", lexicon, concepts)
    large_store = _build_store(large_corpus, work / "large-store", lexicon, concepts)
    small_engine = AnswerEngine(small_store)
    large_engine = AnswerEngine(large_store)
    small_doc_ids = set(small_store.doc_ids())

    queries = [
        line.strip()
        for line in Path(queries_path).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]

    rows = []
    all_ok = True
    ratios = []
    for query in queries:
        t_int_small, set_int_small = _timed_answers(small_engine, query, INTERNAL, reps)
        t_ext_small, set_ext_small = _timed_answers(small_engine, query, EXTERNAL, reps)
        t_ext_large, set_ext_large = _timed_answers(large_engine, query, EXTERNAL, reps)

        modes_equal = set_int_small == set_ext_small
        covers = set_ext_small <= {
            (doc, sent) for doc, sent in set_ext_large if doc in small_doc_ids
        }
        all_ok = all_ok and modes_equal and covers
        ratio = t_ext_large / t_ext_small if t_ext_small > 0 else float("inf")
        ratios.append(ratio)
        rows.append(
            {
                "query": query,
                "timeInternalSmallMs": t_int_small,
                "timeExternalSmallMs": t_ext_small,
                "timeExternalLargeMs": t_ext_large,
                "ratioLargeOverSmallExternal": ratio,
                "modesEqualSmall": modes_equal,
                "largeCoversSmall": covers,
                "answersSmall": len(set_ext_small),
                "answersLarge": len(set_ext_large),
            }
        )

    small_bytes = _corpus_bytes(small_corpus)
    large_bytes = _corpus_bytes(large_corpus)
    geo_mean = statistics.geometric_mean(ratios) if ratios else 0.0
    return {
        "corpus": {
            "smallBytes": small_bytes,
            "largeBytes": large_bytes,
            "sizeRatio": large_bytes / small_bytes if small_bytes else 0.0,
            "smallDocs": len(small_doc_ids),
            "largeDocs": len(large_store.doc_ids()),
        },
        "reps": reps,
        "rows": rows,
        "geometricMeanRatio": geo_mean,
        "status": "ok" if all_ok else "assertion_failed",
    }


def render_table(report: dict) -> str:
    """Plain-text table: per-query times in ms and the (c)/(b) ratio."""
    header = f"{'query':44} {'(a) int/small':>13} {'(b) ext/small':>13} {'(c) ext/large':>13} {'(c)/(b)':>8}"
    lines = [header, "-" * len(header)]
    for row in report["rows"]:
        lines.append(
            f"{row['query'][:44]:44} "
            f"{row['timeInternalSmallMs']:13.2f} "
            f"{row['timeExternalSmallMs']:13.2f} "
            f"{row['timeExternalLargeMs']:13.2f} "
            f"{row['ratioLargeOverSmallExternal']:8.2f}"
        )
    corpus = report["corpus"]
    lines.append(
        f"corpus size ratio {corpus['sizeRatio']:.2f} "
        f"({corpus['largeBytes']}/{corpus['smallBytes']} bytes), "
        f"geometric mean ratio {report['geometricMeanRatio']:.2f}, "
        f"status {report['status']}"
    )
    return "\n".join(lines)


def _write_tsv(report: dict, path: Path) -> None:
    cols = [
        "query",
        "timeInternalSmallMs",
        "timeExternalSmallMs",
        "timeExternalLargeMs",
        "ratioLargeOverSmallExternal",
        "modesEqualSmall",
        "largeCoversSmall",
    ]
    lines = ["\t".join(cols)]
    for row in report["rows"]:
        lines.append("\t".join(str(row[c]) for c in cols))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_figure(report: dict, path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = report["rows"]
    labels = [f"q{i + 1}" for i in range(len(rows))]
    xs = range(len(rows))
    fig, (ax_times, ax_ratio) = plt.subplots(1, 2, figsize=(11, 4.2))

    width = 0.27
    ax_times.bar([x - width for x in xs], [r["timeInternalSmallMs"] for r in rows], width, label="(a) internal small")
    ax_times.bar(list(xs), [r["timeExternalSmallMs"] for r in rows], width, label="(b) external small")
    ax_times.bar([x + width for x in xs], [r["timeExternalLargeMs"] for r in rows], width, label="(c) external large")
    ax_times.set_xticks(list(xs), labels)
    ax_times.set_ylabel("median response time (ms)")
    ax_times.legend(fontsize=8)

    ax_ratio.bar(list(xs), [r["ratioLargeOverSmallExternal"] for r in rows], 0.5, color="#777")
    ax_ratio.axhline(report["corpus"]["sizeRatio"], linestyle="--", color="#c33", label="corpus size ratio")
    ax_ratio.axhline(report["geometricMeanRatio"], linestyle=":", color="#338", label="geometric mean")
    ax_ratio.set_xticks(list(xs), labels)
    ax_ratio.set_ylabel("(c) / (b)")
    ax_ratio.legend(fontsize=8)

    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report(report: dict, out_json: str | Path) -> dict[str, Path]:
    """Write the JSON report plus .tsv and .png siblings; returns the paths."""
    out = Path(out_json)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    tsv = out.with_suffix(".tsv")
    png = out.with_suffix(".png")
    _write_tsv(report, tsv)
    _write_figure(report, png)
    return {"json": out, "tsv": tsv, "png": png}
