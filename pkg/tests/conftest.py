import os

import numpy as np
import pytest

from wordsim.taxonomy import Synset, Taxonomy

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DATA_DIR = os.path.join(REPO_ROOT, "data")
MINI_DIR = os.path.join(DATA_DIR, "mini")

FIXTURE_TAXONOMY_PATH = os.path.join(DATA_DIR, "fixture_taxonomy.tsv")
FIXTURE_COUNTS_PATH = os.path.join(DATA_DIR, "fixture_counts.csv")


@pytest.fixture(scope="session")
def fixture_taxonomy():
    from wordsim.taxonomy import load_taxonomy

    return load_taxonomy(FIXTURE_TAXONOMY_PATH, format="tsv")


@pytest.fixture(scope="session")
def fixture_ic(fixture_taxonomy):
    from wordsim.lexicons import load_counts_csv
    from wordsim.taxonomy import compute_ic

    return compute_ic(fixture_taxonomy, load_counts_csv(FIXTURE_COUNTS_PATH))


def random_taxonomy(rng, max_synsets=50):
    """A random acyclic taxonomy: parents only point at earlier synsets."""
    n = int(rng.integers(2, max_synsets + 1))
    pos = "n" if rng.random() < 0.8 else "v"
    synsets = []
    for i in range(n):
        n_parents = 0
        if i > 0:
            n_parents = int(rng.choice([0, 1, 1, 1, 2]))
        parent_ids = []
        if n_parents:
            picks = rng.choice(i, size=min(n_parents, i), replace=False)
            parent_ids = [f"s{int(p):03d}" for p in sorted(picks)]
        lemmas = [f"w{i:03d}"]
        if i > 0 and rng.random() < 0.2:
            lemmas.append(f"w{int(rng.integers(0, i)):03d}")  # shared lemma
        synsets.append(
            Synset(
                id=f"s{i:03d}",
                pos=pos,
                lemmas=tuple(dict.fromkeys(lemmas)),
                parents=tuple(parent_ids),
            )
        )
    return Taxonomy(synsets)


# ---------------------------------------------------------------------------
# Brute-force oracles, kept deliberately naive and separate from the
# implementations they check.


def oracle_undirected_adjacency(taxonomy):
    adj = {sid: set() for sid in taxonomy.synsets}
    for sid, syn in taxonomy.synsets.items():
        for pid in syn.parents:
            adj[sid].add(pid)
            adj[pid].add(sid)
    return adj


def oracle_all_pairs_distances(taxonomy):
    adj = oracle_undirected_adjacency(taxonomy)
    dist = {}
    for source in adj:
        level = {source: 0}
        frontier = [source]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for node in frontier:
                for nb in adj[node]:
                    if nb not in level:
                        level[nb] = d
                        nxt.append(nb)
            frontier = nxt
        dist[source] = level
    return dist


def oracle_ancestor_sets(taxonomy):
    anc = {}

    def collect(sid):
        if sid in anc:
            return anc[sid]
        found = {sid}
        for pid in taxonomy.synsets[sid].parents:
            found |= collect(pid)
        anc[sid] = found
        return found

    for sid in taxonomy.synsets:
        collect(sid)
    return anc


def oracle_depths(taxonomy):
    """Longest root-to-node path via upward DFS over all parent chains."""
    memo = {}

    def longest(sid):
        if sid in memo:
            return memo[sid]
        parents = taxonomy.synsets[sid].parents
        value = 1 if not parents else 1 + max(longest(p) for p in parents)
        memo[sid] = value
        return value

    return {sid: longest(sid) for sid in taxonomy.synsets}


def oracle_lcs(taxonomy, s1, s2, ancestors=None, depths=None):
    ancestors = ancestors or oracle_ancestor_sets(taxonomy)
    depths = depths or oracle_depths(taxonomy)
    common = ancestors[s1] & ancestors[s2]
    return sorted(common, key=lambda sid: (-depths[sid], sid))[0]


def oracle_ic(taxonomy, counts):
    """Cumulative-count information content via explicit descendant sets."""
    import math

    descendants = {sid: {sid} for sid in taxonomy.synsets}
    changed = True
    while changed:  # fixpoint closure, O(V^2) but fine at oracle scale
        changed = False
        for sid, syn in taxonomy.synsets.items():
            for pid in syn.parents:
                before = len(descendants[pid])
                descendants[pid] |= descendants[sid]
                if len(descendants[pid]) != before:
                    changed = True

    raw = {sid: 0.0 for sid in taxonomy.synsets}
    for lemma, count in counts.items():
        for pos in taxonomy.virtual_root:
            sids = taxonomy.lemma_index.get((lemma, pos), [])
            for sid in sids:
                raw[sid] += count / len(sids)

    cumulative = {
        sid: sum(raw[d] for d in descendants[sid]) for sid in taxonomy.synsets
    }
    ic = {}
    for sid, syn in taxonomy.synsets.items():
        root_total = cumulative[taxonomy.virtual_root[syn.pos]]
        ic[sid] = -math.log((cumulative[sid] + 1.0) / (root_total + 1.0))
    return ic
