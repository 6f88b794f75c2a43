"""Synthetic corpus generation for scaling runs.

Builds a large document collection around a small base corpus: the base
documents are copied verbatim and padded with generated pages about made-up
commands until the collection reaches a requested byte ratio.  Generation is
seeded, so the same arguments always produce the same corpus.

A small number of generated pages deliberately reuse concepts from the base
corpus (files being removed, directories being created and so on) so that
preselection over the large collection has to consider more than the base
documents, but candidate growth per query stays far below the byte growth.
"""

from __future__ import annotations

import random
from pathlib import Path
from typing import NamedTuple

_SYLLABLES = [
    "zar", "flu", "mek", "vor", "bli", "quon", "tras", "pel", "dro", "gim",
    "sna", "kol", "wip", "juf", "nex", "tor", "lam", "brid", "cev", "yol",
]

_VERBS = [
    "scan", "convert", "merge", "encode", "decode", "fetch", "export",
    "inspect", "validate", "transform", "render", "rotate", "trace",
    "measure", "monitor", "capture", "translate", "annotate", "compare",
    "verify", "assemble", "collect", "emit", "mount", "patch",
]

# Verbs whose past participle is plain +ed / +d, for passive templates.
_PASSIVE_VERBS = [v for v in _VERBS if v not in ("scan", "emit")]

_NOUNS = [
    "bundle", "widget", "snapshot", "journal", "manifest", "capsule",
    "parcel", "socket", "chunk", "region", "layer", "profile", "palette",
    "beacon", "spool", "ledger",
]

_ADJS = ["stale", "compact", "remote", "local", "binary", "temporary", "simple", "strict"]

# Lines that overlap with base-corpus concepts, with the number of generated
# documents that carry each one.  Kept small so per-query candidate growth
# stays well under the byte growth of the collection.
_OVERLAP = [
    ("the command copies a file into the {n}", 3),
    ("the command creates a directory for each {n}", 4),
    ("the command removes an empty directory", 2),
    ("a file is removed when the {n} option is given", 3),
    ("the command removes duplicate columns from a {n}", 2),
    ("the command removes stale files", 5),
]


class SynthSummary(NamedTuple):
    doc_count: int
    base_bytes: int
    total_bytes: int
    ratio: float


def _third_person(verb: str) -> str:
    if verb.endswith(("ss", "x", "z", "sh", "ch")):
        return verb + "es"
    return verb + "s"


def _participle(verb: str) -> str:
    return verb + "d" if verb.endswith("e") else verb + "ed"


def _fresh_name(rng: random.Random, used: set[str]) -> str:
    while True:
        name = "".join(rng.choice(_SYLLABLES) for _ in range(rng.randrange(2, 4)))
        if name not in used:
            used.add(name)
            return name


def _plain_line(rng: random.Random, name: str) -> str:
    n, n2, n3 = rng.sample(_NOUNS, 3)
    verb = rng.choice(_VERBS)
    adj = rng.choice(_ADJS)
    template = rng.randrange(7)
    if template == 0:
        return f"{name} {_third_person(verb)} each {n}"
    if template == 1:
        return f"{name} {_third_person(verb)} the {n} of each {n2}"
    if template == 2:
        return f"{name} {_third_person(verb)} {n}s into a {n2}"
    if template == 3:
        return f"the {n} is {_participle(rng.choice(_PASSIVE_VERBS))} by {name}"
    if template == 4:
        return f"a {adj} {n} is {_participle(rng.choice(_PASSIVE_VERBS))} when the {n2} option is given"
    if template == 5:
        return f"{name} is a {n} for {n2} {n3}"
    return f"{name} {_third_person(verb)} a {adj} {n}"


def _doc_lines(rng: random.Random, name: str, overlap: str | None) -> list[str]:
    lines = [_plain_line(rng, name) for _ in range(rng.randrange(3, 7))]
    if overlap is not None:
        lines.insert(rng.randrange(len(lines) + 1), overlap.format(n=rng.choice(_NOUNS)))
    return lines


def synthesize_corpus(
    out_dir: str | Path,
    base_dir: str | Path,
    ratio: float = 13.6,
    seed: int = 7,
    tolerance: float = 0.02,
) -> SynthSummary:
    """Write a seeded large corpus under out_dir and return its summary.

    The result holds a copy of every base document plus generated documents,
    with total bytes within tolerance of ratio times the base bytes.  The
    window must be at least one sentence wide (roughly 30 bytes) to be
    reachable; a degenerate tiny target gets as close as whole sentences
    allow, and the summary reports the achieved ratio either way.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)

    used = set()
    base_bytes = 0
    total = 0
    count = 0
    for doc in sorted(Path(base_dir).glob("*.txt")):
        body = doc.read_text(encoding="utf-8")
        (out / doc.name).write_text(body, encoding="utf-8", newline="\n")
        used.add(doc.stem)
        base_bytes += len(body.encode("utf-8"))
        count += 1
    total = base_bytes

    target = base_bytes * ratio
    low = target * (1.0 - tolerance)
    high = target * (1.0 + tolerance)

    pending = [line for line, copies in _OVERLAP for _ in range(copies)]
    while total < low:
        name = _fresh_name(rng, used)
        overlap = pending.pop(0) if pending else None
        body = ""
        for line in _doc_lines(rng, name, overlap):
            candidate = body + line + "\n"
            if total + len(candidate.encode("utf-8")) > high:
                continue  # over budget; a later, shorter line may still fit
            body = candidate
        if not body:
            # Close to the ceiling: hunt for any single sentence that fits.
            for _ in range(80):
                line = _plain_line(rng, name) + "\n"
                if total + len(line.encode("utf-8")) <= high:
                    body = line
                    break
        if not body:
            break  # window narrower than one sentence
        if overlap is not None and overlap.split("{", 1)[0] not in body:
            pending.insert(0, overlap)
        (out / f"{name}.txt").write_text(body, encoding="utf-8", newline="\n")
        total += len(body.encode("utf-8"))
        count += 1

    return SynthSummary(
        doc_count=count,
        base_bytes=base_bytes,
        total_bytes=total,
        ratio=total / base_bytes if base_bytes else 0.0,
    )
