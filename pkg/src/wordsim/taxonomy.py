"""Hypernym taxonomy storage, graph queries, and similarity metrics.

A :class:`Taxonomy` is a per-POS acyclic hypernym graph of synsets. Each POS
gets a synthetic virtual root that adopts every parentless synset, so any two
same-POS synsets are connected and every graph query is total.

Six pairwise metrics are provided: ``path``, ``lch``, and ``wup`` need only
the graph; ``res``, ``jcn``, and ``lin`` additionally need an information
content table built with :func:`compute_ic`. All of them grow with similarity
except ``jcn``, which is a distance.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .errors import (
    CycleError,
    MissingResourceError,
    OutOfVocabularyError,
    ParseError,
    PosMismatchError,
    WordsimError,
)

NOUN = "n"
VERB = "v"
POS_TAGS = (NOUN, VERB)

METRICS = ("path", "lch", "wup", "res", "jcn", "lin")
IC_METRICS = ("res", "jcn", "lin")

VIRTUAL_ROOT_IDS = {NOUN: "__root_n__", VERB: "__root_v__"}


@dataclass(frozen=True)
class Synset:
    """One concept node: an id, a POS tag, its lemmas, and hypernym ids."""

    id: str
    pos: str
    lemmas: tuple
    parents: tuple

    def __post_init__(self):
        if self.pos not in POS_TAGS:
            raise WordsimError(f"synset {self.id!r}: bad pos {self.pos!r}")
        if not self.lemmas:
            raise WordsimError(f"synset {self.id!r}: empty lemma list")
        for lemma in self.lemmas:
            if lemma != lemma.lower() or any(c.isspace() for c in lemma):
                raise WordsimError(
                    f"synset {self.id!r}: lemma {lemma!r} must be lowercase "
                    "with no whitespace"
                )


@dataclass(frozen=True)
class MetricScore:
    metric: str
    value: float

    @property
    def polarity(self):
        return "distance" if self.metric == "jcn" else "similarity"


@dataclass(frozen=True)
class ICTable:
    """Synset id -> information content in natural-log units."""

    ic: dict
    total_tokens: int

    def __getitem__(self, synset_id):
        return self.ic[synset_id]


class Taxonomy:
    """Immutable hypernym graph with lemma index and depth bookkeeping.

    Construction wires every parentless synset of a POS to that POS's
    virtual root, verifies acyclicity, and precomputes node-counting depths
    (virtual root at depth 1, ``depth = 1 + max(parent depths)``).
    """

    def __init__(self, synsets):
        nodes = {}
        for syn in synsets:
            if syn.id in nodes:
                raise WordsimError(f"duplicate synset id {syn.id!r}")
            if syn.id in VIRTUAL_ROOT_IDS.values():
                raise WordsimError(f"synset id {syn.id!r} is reserved")
            nodes[syn.id] = syn

        for syn in synsets:
            for pid in syn.parents:
                parent = nodes.get(pid)
                if parent is None:
                    raise WordsimError(
                        f"synset {syn.id!r}: unknown parent {pid!r}"
                    )
                if parent.pos != syn.pos:
                    raise WordsimError(
                        f"synset {syn.id!r}: parent {pid!r} has pos "
                        f"{parent.pos!r}, expected {syn.pos!r}"
                    )

        # Adopt parentless synsets under per-POS virtual roots.
        present_pos = sorted({s.pos for s in synsets}) or list(POS_TAGS)
        self.virtual_root = {p: VIRTUAL_ROOT_IDS[p] for p in present_pos}
        full = {}
        for pos in present_pos:
            rid = self.virtual_root[pos]
            full[rid] = Synset(id=rid, pos=pos, lemmas=(rid,), parents=())
        for syn in synsets:
            parents = syn.parents or (self.virtual_root[syn.pos],)
            full[syn.id] = Synset(syn.id, syn.pos, syn.lemmas, tuple(parents))
        self.synsets = full

        self._children = {sid: [] for sid in full}
        for syn in full.values():
            for pid in syn.parents:
                self._children[pid].append(syn.id)
        for kids in self._children.values():
            kids.sort()

        self._check_acyclic()
        self._adjacency = {
            sid: list(full[sid].parents) + self._children[sid] for sid in full
        }
        self._depths = self._compute_depths()
        self._max_depth = {
            pos: max(
                self._depths[sid]
                for sid, syn in full.items()
                if syn.pos == pos
            )
            for pos in present_pos
        }

        # Virtual roots are bookkeeping, not queryable words.
        roots = set(self.virtual_root.values())
        self.lemma_index = {}
        for sid in sorted(full):
            if sid in roots:
                continue
            syn = full[sid]
            for lemma in syn.lemmas:
                self.lemma_index.setdefault((lemma, syn.pos), []).append(sid)

    def _check_acyclic(self):
        state = {}  # 0 = visiting, 1 = done
        for start in self.synsets:
            if start in state:
                continue
            stack = [(start, iter(self.synsets[start].parents))]
            state[start] = 0
            while stack:
                sid, parents = stack[-1]
                advanced = False
                for pid in parents:
                    if state.get(pid) == 0:
                        raise CycleError(pid)
                    if pid not in state:
                        state[pid] = 0
                        stack.append((pid, iter(self.synsets[pid].parents)))
                        advanced = True
                        break
                if not advanced:
                    state[sid] = 1
                    stack.pop()

    def _compute_depths(self):
        depths = {}
        order = deque(self.virtual_root.values())
        indeg = {sid: len(self.synsets[sid].parents) for sid in self.synsets}
        for rid in self.virtual_root.values():
            depths[rid] = 1
        while order:
            sid = order.popleft()
            for child in self._children[sid]:
                cand = depths[sid] + 1
                if cand > depths.get(child, 0):
                    depths[child] = cand
                indeg[child] -= 1
                if indeg[child] == 0:
                    order.append(child)
        return depths

    def __contains__(self, synset_id):
        return synset_id in self.synsets

    def get(self, synset_id):
        syn = self.synsets.get(synset_id)
        if syn is None:
            raise WordsimError(f"unknown synset {synset_id!r}")
        return syn

    def synsets_for(self, word, pos):
        """All synset ids containing ``word`` under ``pos`` (may be empty)."""
        return list(self.lemma_index.get((word.lower(), pos), ()))

    def max_depth(self, pos):
        return self._max_depth[pos]

    def neighbors(self, synset_id):
        """Undirected neighbors (parents plus children); do not mutate."""
        self.get(synset_id)
        return self._adjacency[synset_id]

    def ancestors_or_self(self, synset_id):
        """Set of ids reachable via parent links, including the synset."""
        seen = {synset_id}
        frontier = deque((synset_id,))
        while frontier:
            sid = frontier.popleft()
            for pid in self.synsets[sid].parents:
                if pid not in seen:
                    seen.add(pid)
                    frontier.append(pid)
        return seen


def parse_taxonomy_tsv(path):
    """Parse the fixture TSV format into a list of :class:`Synset`.

    One synset per line: ``id<TAB>pos<TAB>lemma,lemma<TAB>parent,parent``.
    An empty parent field attaches the synset to its POS's virtual root.
    ``#`` lines and blank lines are skipped.
    """
    synsets = []
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) not in (3, 4):
                raise ParseError(
                    f"expected 3 or 4 tab-separated fields, got {len(fields)}",
                    path=path,
                    line=lineno,
                )
            sid, pos, lemma_field = fields[0], fields[1], fields[2]
            parent_field = fields[3] if len(fields) == 4 else ""
            if pos not in POS_TAGS:
                raise ParseError(
                    f"bad pos {pos!r} (expected one of {POS_TAGS})",
                    path=path,
                    line=lineno,
                )
            lemmas = tuple(
                w.strip().lower() for w in lemma_field.split(",") if w.strip()
            )
            if not lemmas:
                raise ParseError("empty lemma field", path=path, line=lineno)
            parents = tuple(
                p.strip() for p in parent_field.split(",") if p.strip()
            )
            try:
                synsets.append(Synset(sid, pos, lemmas, parents))
            except WordsimError as exc:
                raise ParseError(str(exc), path=path, line=lineno) from exc
    return synsets


def load_taxonomy(path, format="tsv"):
    """Load a taxonomy from ``path`` in ``tsv`` or ``wndb`` format.

    ``tsv`` points at a single fixture file; ``wndb`` points at a directory
    holding WordNet 3.x ``index.noun/index.verb/data.noun/data.verb`` files.
    """
    if format == "tsv":
        return Taxonomy(parse_taxonomy_tsv(path))
    if format == "wndb":
        from .wndb import parse_wndb_dir

        return Taxonomy(parse_wndb_dir(path))
    raise WordsimError(f"unknown taxonomy format {format!r}")


def _bfs_distances(taxonomy, source, targets=None):
    """Edge distances from ``source`` over the undirected hypernym graph.

    Stops early once every id in ``targets`` has been reached.
    """
    remaining = set(targets) if targets is not None else None
    dist = {source: 0}
    if remaining is not None:
        remaining.discard(source)
        if not remaining:
            return dist
    frontier = deque((source,))
    while frontier:
        sid = frontier.popleft()
        d = dist[sid] + 1
        for nid in taxonomy.neighbors(sid):
            if nid not in dist:
                dist[nid] = d
                if remaining is not None:
                    remaining.discard(nid)
                    if not remaining:
                        return dist
                frontier.append(nid)
    return dist


def _require_same_pos(s1, s2):
    if s1.pos != s2.pos:
        raise PosMismatchError(
            f"synsets {s1.id!r} ({s1.pos}) and {s2.id!r} ({s2.pos}) "
            "are in different hierarchies"
        )


def shortest_path_length(taxonomy, s1, s2):
    """Minimal edge count between two same-POS synsets, links undirected."""
    s1, s2 = taxonomy.get(_sid(s1)), taxonomy.get(_sid(s2))
    _require_same_pos(s1, s2)
    if s1.id == s2.id:
        return 0
    dist = _bfs_distances(taxonomy, s1.id, targets={s2.id})
    return dist[s2.id]


def synset_depth(taxonomy, s):
    """Nodes on the longest root-to-synset path; virtual root has depth 1."""
    return taxonomy._depths[taxonomy.get(_sid(s)).id]


def least_common_subsumer(taxonomy, s1, s2):
    """Deepest common ancestor; ties broken by smallest id."""
    s1, s2 = taxonomy.get(_sid(s1)), taxonomy.get(_sid(s2))
    _require_same_pos(s1, s2)
    common = taxonomy.ancestors_or_self(s1.id) & taxonomy.ancestors_or_self(
        s2.id
    )
    best = min(common, key=lambda sid: (-taxonomy._depths[sid], sid))
    return taxonomy.get(best)


def _sid(s):
    return s.id if isinstance(s, Synset) else s


def compute_ic(taxonomy, counts):
    """Build an :class:`ICTable` from lemma counts.

    Each lemma's count is divided equally among its same-POS synsets; a
    synset's cumulative count adds everything below it; probabilities are
    add-1 smoothed against the cumulative count at the POS root, and
    ``ic = -ln p``. The virtual root always gets ic 0.
    """
    total = float(sum(counts.values()))
    if not counts or total <= 0:
        raise WordsimError("empty counts: need a positive total")

    raw = {sid: 0.0 for sid in taxonomy.synsets}
    for lemma, count in counts.items():
        for pos in taxonomy.virtual_root:
            sids = taxonomy.lemma_index.get((lemma.lower(), pos))
            if not sids:
                continue
            share = float(count) / len(sids)
            for sid in sids:
                raw[sid] += share

    cumulative = {sid: 0.0 for sid in taxonomy.synsets}
    for sid, weight in raw.items():
        if weight == 0.0:
            continue
        for aid in taxonomy.ancestors_or_self(sid):
            cumulative[aid] += weight

    ic = {}
    for sid, syn in taxonomy.synsets.items():
        root_total = cumulative[taxonomy.virtual_root[syn.pos]]
        p = (cumulative[sid] + 1.0) / (root_total + 1.0)
        ic[sid] = -math.log(p)
    for rid in taxonomy.virtual_root.values():
        ic[rid] = 0.0
    return ICTable(ic=ic, total_tokens=int(total))


def synset_similarity(metric, taxonomy, s1, s2, ic=None):
    """Score one synset pair under ``metric``; natural logs throughout."""
    if metric not in METRICS:
        raise WordsimError(f"unknown metric {metric!r}")
    s1, s2 = taxonomy.get(_sid(s1)), taxonomy.get(_sid(s2))
    _require_same_pos(s1, s2)
    if metric in IC_METRICS and ic is None:
        raise MissingResourceError(f"metric {metric!r} needs an ICTable")

    if metric == "path":
        d = shortest_path_length(taxonomy, s1, s2)
        value = 1.0 / (d + 1.0)
    elif metric == "lch":
        d = shortest_path_length(taxonomy, s1, s2)
        big_d = taxonomy.max_depth(s1.pos)
        value = -math.log((d + 1.0) / (2.0 * big_d))
    elif metric == "wup":
        lcs = least_common_subsumer(taxonomy, s1, s2)
        value = (
            2.0
            * synset_depth(taxonomy, lcs)
            / (synset_depth(taxonomy, s1) + synset_depth(taxonomy, s2))
        )
    else:
        lcs = least_common_subsumer(taxonomy, s1, s2)
        ic1, ic2, ic_lcs = ic[s1.id], ic[s2.id], ic[lcs.id]
        if metric == "res":
            value = ic_lcs
        elif metric == "jcn":
            value = ic1 + ic2 - 2.0 * ic_lcs
        else:  # lin
            denom = ic1 + ic2
            value = 0.0 if denom == 0.0 else 2.0 * ic_lcs / denom
    return MetricScore(metric=metric, value=value)


def word_similarity(metric, taxonomy, w1, w2, pos, ic=None):
    """Best score over all same-POS synset pairs of two words.

    "Best" is the maximum for similarity metrics and the minimum for the
    jcn distance.
    """
    sids1 = taxonomy.synsets_for(w1, pos)
    if not sids1:
        raise OutOfVocabularyError(w1, where=f"taxonomy ({pos})")
    sids2 = taxonomy.synsets_for(w2, pos)
    if not sids2:
        raise OutOfVocabularyError(w2, where=f"taxonomy ({pos})")

    pick = min if metric == "jcn" else max
    best = None
    for sid1 in sids1:
        for sid2 in sids2:
            score = synset_similarity(metric, taxonomy, sid1, sid2, ic=ic)
            if best is None:
                best = score.value
            else:
                best = pick(best, score.value)
    return MetricScore(metric=metric, value=best)


def word_metric_profile(taxonomy, w1, w2, pos, metrics=METRICS, ic=None):
    """All requested metrics for a word pair, sharing graph work.

    Equivalent to calling :func:`word_similarity` per metric but computes
    BFS distances, depths, and subsumers once per synset pair, which matters
    on full-size taxonomies.
    """
    sids1 = taxonomy.synsets_for(w1, pos)
    if not sids1:
        raise OutOfVocabularyError(w1, where=f"taxonomy ({pos})")
    sids2 = taxonomy.synsets_for(w2, pos)
    if not sids2:
        raise OutOfVocabularyError(w2, where=f"taxonomy ({pos})")

    need_d = any(m in ("path", "lch") for m in metrics)
    need_lcs = any(m in ("wup", "res", "jcn", "lin") for m in metrics)
    for m in metrics:
        if m in IC_METRICS and ic is None:
            raise MissingResourceError(f"metric {m!r} needs an ICTable")

    big_d = taxonomy.max_depth(taxonomy.get(sids1[0]).pos)
    anc2 = {sid2: taxonomy.ancestors_or_self(sid2) for sid2 in sids2}
    best = {}
    for sid1 in sids1:
        dists = (
            _bfs_distances(taxonomy, sid1, targets=set(sids2))
            if need_d
            else None
        )
        anc1 = taxonomy.ancestors_or_self(sid1) if need_lcs else None
        for sid2 in sids2:
            vals = {}
            if need_d:
                d = dists[sid2]
                if "path" in metrics:
                    vals["path"] = 1.0 / (d + 1.0)
                if "lch" in metrics:
                    vals["lch"] = -math.log((d + 1.0) / (2.0 * big_d))
            if need_lcs:
                common = anc1 & anc2[sid2]
                lcs = min(
                    common,
                    key=lambda sid: (-taxonomy._depths[sid], sid),
                )
                if "wup" in metrics:
                    vals["wup"] = (
                        2.0
                        * taxonomy._depths[lcs]
                        / (
                            taxonomy._depths[sid1]
                            + taxonomy._depths[sid2]
                        )
                    )
                if ic is not None:
                    ic1, ic2, ic_lcs = ic[sid1], ic[sid2], ic[lcs]
                    if "res" in metrics:
                        vals["res"] = ic_lcs
                    if "jcn" in metrics:
                        vals["jcn"] = ic1 + ic2 - 2.0 * ic_lcs
                    if "lin" in metrics:
                        denom = ic1 + ic2
                        vals["lin"] = (
                            0.0 if denom == 0.0 else 2.0 * ic_lcs / denom
                        )
            for m, v in vals.items():
                if m not in best:
                    best[m] = v
                elif m == "jcn":
                    best[m] = min(best[m], v)
                else:
                    best[m] = max(best[m], v)
    return {m: MetricScore(metric=m, value=best[m]) for m in metrics}
