"""Reader for WordNet 3.x database files (``index.*`` / ``data.*``).

Only the noun and verb hierarchies are read. ``data.<pos>`` records are the
ground truth for synsets and hypernym edges (pointer symbols ``@`` and
``@i``, the latter treated as a plain hypernym); ``index.<pos>`` files, when
present, contribute extra lemma spellings so the lemma index stays the exact
inverse of the synset lemma lists. All other pointer types, verb frames, and
glosses are ignored.
"""

from __future__ import annotations

import os

from .errors import ParseError
from .taxonomy import Synset

POS_SUFFIX = {"n": "noun", "v": "verb"}
HYPERNYM_SYMBOLS = ("@", "@i")


def _is_license_line(line):
    return line.startswith("  ") or not line.strip()


def parse_data_file(path, pos):
    """Parse one ``data.<pos>`` file into ``{synset_id: (lemmas, parents)}``."""
    records = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            if _is_license_line(raw):
                continue
            tokens = raw.split("|", 1)[0].split()
            try:
                offset = tokens[0]
                int(offset)
                ss_type = tokens[2]
                if ss_type != pos:
                    raise ValueError(
                        f"ss_type {ss_type!r} does not match file pos {pos!r}"
                    )
                w_cnt = int(tokens[3], 16)
                if w_cnt < 1:
                    raise ValueError("zero word count")
                words = [tokens[4 + 2 * i] for i in range(w_cnt)]
                p_start = 4 + 2 * w_cnt
                p_cnt = int(tokens[p_start])
                parents = []
                for i in range(p_cnt):
                    base = p_start + 1 + 4 * i
                    symbol, tgt_offset, tgt_pos, _src = tokens[
                        base : base + 4
                    ]
                    int(tgt_offset)
                    if symbol in HYPERNYM_SYMBOLS and tgt_pos == pos:
                        parents.append(pos + tgt_offset)
                if len(tokens) < p_start + 1 + 4 * p_cnt:
                    raise ValueError("truncated pointer list")
            except (IndexError, ValueError) as exc:
                raise ParseError(
                    f"malformed data record: {exc}", path=path, line=lineno
                ) from exc
            sid = pos + offset
            lemmas = tuple(dict.fromkeys(w.lower() for w in words))
            records[sid] = (lemmas, tuple(dict.fromkeys(parents)))
    return records


def parse_index_file(path, pos):
    """Parse one ``index.<pos>`` file into ``{lemma: [synset_ids]}``."""
    entries = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            if _is_license_line(raw):
                continue
            tokens = raw.split()
            try:
                lemma = tokens[0].lower()
                synset_cnt = int(tokens[2])
                p_cnt = int(tokens[3])
                offsets = tokens[4 + p_cnt + 2 :]
                if len(offsets) < synset_cnt:
                    raise ValueError("fewer offsets than synset_cnt")
                for off in offsets[:synset_cnt]:
                    int(off)
            except (IndexError, ValueError) as exc:
                raise ParseError(
                    f"malformed index record: {exc}", path=path, line=lineno
                ) from exc
            entries[lemma] = [pos + off for off in offsets[:synset_cnt]]
    return entries


def parse_wndb_dir(path):
    """Read a WordNet database directory into a list of :class:`Synset`.

    Parses whichever of ``data.noun`` / ``data.verb`` exist (at least one is
    required). Parents pointing at offsets missing from the data file are a
    parse error; index entries pointing at unknown offsets are too.
    """
    all_synsets = []
    seen_any = False
    for pos, suffix in POS_SUFFIX.items():
        data_path = os.path.join(path, f"data.{suffix}")
        if not os.path.exists(data_path):
            continue
        seen_any = True
        records = parse_data_file(data_path, pos)

        for sid, (_lemmas, parents) in records.items():
            for pid in parents:
                if pid not in records:
                    raise ParseError(
                        f"synset {sid} points at unknown offset {pid[1:]}",
                        path=data_path,
                    )

        index_path = os.path.join(path, f"index.{suffix}")
        if os.path.exists(index_path):
            for lemma, sids in parse_index_file(index_path, pos).items():
                for sid in sids:
                    if sid not in records:
                        raise ParseError(
                            f"index entry {lemma!r} points at unknown "
                            f"offset {sid[1:]}",
                            path=index_path,
                        )
                    lemmas, parents = records[sid]
                    if lemma not in lemmas:
                        records[sid] = (lemmas + (lemma,), parents)

        for sid in sorted(records):
            lemmas, parents = records[sid]
            all_synsets.append(
                Synset(id=sid, pos=pos, lemmas=lemmas, parents=parents)
            )
    if not seen_any:
        raise ParseError(
            "no data.noun or data.verb file found", path=str(path)
        )
    return all_synsets
