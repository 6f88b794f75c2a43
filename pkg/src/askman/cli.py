"""Command line front end.

Subcommands: ``index`` builds a clause store from a corpus directory,
``query`` answers a question against a store, ``serve`` exposes the store
over HTTP, ``bench`` times the query configurations and writes a report,
``synth`` generates a large corpus, and ``fixtures`` exports the packaged
sample data.  The environment variable ``EXTRANS_STORE`` supplies the
default store root wherever ``--store`` is accepted.

Exit codes: 0 success (an empty answer list is success), 1 runtime failure
such as a corrupt store, 2 usage or missing-file errors, 3 unparseable
question, 4 benchmark equality assertion failure.
"""

from __future__ import annotations

import argparse
import os
import shutil
import sys
from importlib import resources
from pathlib import Path

from .bench import render_table, run_bench, write_report
from .corpusgen import synthesize_corpus
from .engine import AnswerEngine
from .logform import UnparseableQuery
from .store import EXTERNAL, INTERNAL, CorpusStore, StoreError


def _data_path(name: str) -> str:
    return str(resources.files("askman") / "data" / name)


def _store_root(args) -> str:
    root = args.store or os.environ.get("EXTRANS_STORE")
    if not root:
        print("no store given: pass --store or set EXTRANS_STORE", file=sys.stderr)
        raise SystemExit(2)
    return root


def mark_spans(text: str, spans) -> str:
    """Wrap highlight spans in << >> markers."""
    out = []
    pos = 0
    for start, end in spans:
        out.append(text[pos:start])
        out.append("<<")
        out.append(text[start:end])
        out.append(">>")
        pos = end
    out.append(text[pos:])
    return "".join(out)


def cmd_index(args) -> int:
    for label, path in (("lexicon", args.lexicon), ("concepts", args.concepts)):
        if not Path(path).is_file():
            print(f"missing {label} file: {path}", file=sys.stderr)
            return 2
    corpus = Path(args.corpus)
    if not corpus.is_dir():
        print(f"missing corpus directory: {corpus}", file=sys.stderr)
        return 2
    store = CorpusStore.create(_store_root(args), args.lexicon, args.concepts)
    docs = sentences = facts = 0
    for path in sorted(corpus.glob("*.txt")):
        try:
            body = path.read_text(encoding="utf-8")
        except OSError as err:
            print(f"cannot read {path}: {err}", file=sys.stderr)
            return 1
        doc = store.ingest_document(path.stem, body)
        docs += 1
        sentences += len(doc.sentences)
        facts += len(doc.facts)
    store.save_index()
    print(f"{docs} documents, {sentences} sentences, {facts} facts")
    return 0


def cmd_query(args) -> int:
    store = CorpusStore.open(_store_root(args))
    engine = AnswerEngine(store)
    try:
        answers = engine.answer(args.question, mode=args.mode)
    except UnparseableQuery as err:
        print(f"cannot parse question: {err}", file=sys.stderr)
        return 3
    for ans in answers:
        line = mark_spans(ans.sentence_text, ans.spans)
        print(f"{ans.score:.4f}\t{ans.doc_id}\t{ans.sent_id}\t{line}")
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    serve(_store_root(args), host=args.host, port=args.port, ui_dir=args.ui)
    return 0


def cmd_bench(args) -> int:
    report = run_bench(
        small_corpus=args.small,
        large_corpus=args.large,
        queries_path=args.queries,
        reps=args.reps,
        lexicon_path=args.lexicon,
        concepts_path=args.concepts,
        work_dir=args.work,
    )
    write_report(report, args.out)
    print(render_table(report))
    if report["status"] != "ok":
        print("ASSERTION_FAILED: answer sets diverged between configurations", file=sys.stderr)
        return 4
    return 0


def cmd_synth(args) -> int:
    summary = synthesize_corpus(args.out, args.base, ratio=args.ratio, seed=args.seed)
    print(
        f"{summary.doc_count} documents, {summary.total_bytes} bytes, "
        f"ratio {summary.ratio:.2f} over {summary.base_bytes} base bytes"
    )
    return 0


def cmd_fixtures(args) -> int:
    out = Path(args.out)
    (out / "corpus").mkdir(parents=True, exist_ok=True)
    for name in ("lexicon.tsv", "concepts.tsv", "queries.txt"):
        shutil.copyfile(_data_path(name), out / name)
    corpus = resources.files("askman") / "data" / "corpus"
    count = 0
    for entry in sorted(corpus.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".txt"):
            shutil.copyfile(str(entry), out / "corpus" / entry.name)
            count += 1
    print(f"wrote {count} corpus documents and 3 data files to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="askman", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="build a clause store from a corpus directory")
    p.add_argument("--corpus", required=True, help="directory of *.txt documents")
    p.add_argument("--store", help="store root (default: EXTRANS_STORE)")
    p.add_argument("--lexicon", default=_data_path("lexicon.tsv"), help="word lexicon file")
    p.add_argument("--concepts", default=_data_path("concepts.tsv"), help="concept lexicon file")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("query", help="answer a question against a store")
    p.add_argument("--store", help="store root (default: EXTRANS_STORE)")
    p.add_argument("--mode", choices=(INTERNAL, EXTERNAL), default=EXTERNAL)
    p.add_argument("question")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("serve", help="serve a store over HTTP")
    p.add_argument("--store", help="store root (default: EXTRANS_STORE)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--ui", help="static UI directory (default: packaged page)")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("bench", help="time both storage modes on two corpora")
    p.add_argument("--small", required=True, help="small corpus directory")
    p.add_argument("--large", required=True, help="large corpus directory")
    p.add_argument("--queries", default=_data_path("queries.txt"), help="query file, one per line")
    p.add_argument("--reps", type=int, default=9, help="timed repetitions per query")
    p.add_argument("--out", required=True, help="report JSON path (.tsv and .png written alongside)")
    p.add_argument("--lexicon", default=_data_path("lexicon.tsv"))
    p.add_argument("--concepts", default=_data_path("concepts.tsv"))
    p.add_argument("--work", help="directory for the temporary stores")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("synth", help="generate a large corpus around a base corpus")
    p.add_argument("--out", required=True, help="output corpus directory")
    p.add_argument("--base", default=_data_path("corpus"), help="base corpus directory")
    p.add_argument("--ratio", type=float, default=13.6, help="target byte ratio over the base")
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("fixtures", help="export the packaged sample corpus and lexicons")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_fixtures)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StoreError as err:
        print(f"store error: {err}", file=sys.stderr)
        return 1
    except FileNotFoundError as err:
        print(f"missing file: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
