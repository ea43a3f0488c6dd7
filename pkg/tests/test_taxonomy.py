import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import (
    FIXTURE_TAXONOMY_PATH,
    oracle_all_pairs_distances,
    oracle_ancestor_sets,
    oracle_depths,
    oracle_ic,
    oracle_lcs,
    random_taxonomy,
)
from wordsim.errors import (
    CycleError,
    MissingResourceError,
    OutOfVocabularyError,
    ParseError,
    PosMismatchError,
    WordsimError,
)
from wordsim.taxonomy import (
    METRICS,
    Synset,
    Taxonomy,
    compute_ic,
    least_common_subsumer,
    load_taxonomy,
    shortest_path_length,
    synset_depth,
    synset_similarity,
    word_metric_profile,
    word_similarity,
)


def tiny(*rows):
    return Taxonomy([Synset(*row) for row in rows])


class TestTsvParsing:
    def test_basic_line(self, tmp_path):
        path = tmp_path / "t.tsv"
        path.write_text("wv0\tn\tvehicle\t\nwv1\tn\tcar,auto\twv0\n")
        t = load_taxonomy(path)
        syn = t.get("wv1")
        assert syn.pos == "n"
        assert syn.lemmas == ("car", "auto")
        assert syn.parents == ("wv0",)

    def test_comments_and_blanks_skipped(self, tmp_path):
        path = tmp_path / "t.tsv"
        path.write_text("# header\n\na\tn\tcat\t\n")
        assert "a" in load_taxonomy(path).synsets

    def test_bad_pos_reports_line(self, tmp_path):
        path = tmp_path / "t.tsv"
        path.write_text("a\tn\tcat\t\nb\tx\tdog\t\n")
        with pytest.raises(ParseError) as err:
            load_taxonomy(path)
        assert err.value.line == 2

    def test_wrong_field_count(self, tmp_path):
        path = tmp_path / "t.tsv"
        path.write_text("a\tn\n")
        with pytest.raises(ParseError):
            load_taxonomy(path)

    def test_empty_lemmas_rejected(self, tmp_path):
        path = tmp_path / "t.tsv"
        path.write_text("a\tn\t\t\n")
        with pytest.raises(ParseError):
            load_taxonomy(path)

    def test_cycle_error_names_a_synset(self, tmp_path):
        path = tmp_path / "t.tsv"
        path.write_text("a\tn\tcat\tb\nb\tn\tdog\ta\n")
        with pytest.raises(CycleError) as err:
            load_taxonomy(path)
        assert err.value.synset_id in ("a", "b")

    def test_unknown_parent_rejected(self, tmp_path):
        path = tmp_path / "t.tsv"
        path.write_text("a\tn\tcat\tnope\n")
        with pytest.raises(WordsimError):
            load_taxonomy(path)

    def test_duplicate_id_rejected(self, tmp_path):
        path = tmp_path / "t.tsv"
        path.write_text("a\tn\tcat\t\na\tn\tdog\t\n")
        with pytest.raises(WordsimError):
            load_taxonomy(path)


class TestConstruction:
    def test_parent_pos_must_match(self):
        with pytest.raises(WordsimError):
            tiny(("a", "n", ("cat",), ()), ("b", "v", ("run",), ("a",)))

    def test_parentless_attach_to_virtual_root(self):
        t = tiny(("a", "n", ("cat",), ()))
        assert t.get("a").parents == (t.virtual_root["n"],)

    def test_lemma_index_is_inverse_of_lemmas(self, fixture_taxonomy):
        t = fixture_taxonomy
        roots = set(t.virtual_root.values())
        rebuilt = {}
        for sid in sorted(t.synsets):
            if sid in roots:
                continue
            syn = t.synsets[sid]
            for lemma in syn.lemmas:
                rebuilt.setdefault((lemma, syn.pos), []).append(sid)
        assert rebuilt == t.lemma_index

    def test_lemmas_must_be_lowercase(self):
        with pytest.raises(WordsimError):
            Synset("a", "n", ("Cat",), ())
        with pytest.raises(WordsimError):
            Synset("a", "n", ("two words",), ())


class TestFixtureValues:
    """Anchor values for the bundled hierarchy."""

    def test_shortest_paths(self, fixture_taxonomy):
        t = fixture_taxonomy
        assert shortest_path_length(t, "n-car", "n-bicycle") == 2
        assert shortest_path_length(t, "n-car", "n-factory") == 7
        assert shortest_path_length(t, "n-car", "n-car") == 0

    def test_depths(self, fixture_taxonomy):
        t = fixture_taxonomy
        assert synset_depth(t, t.virtual_root["n"]) == 1
        assert synset_depth(t, "n-wheeled-vehicle") == 8
        assert synset_depth(t, "n-car") == 9

    def test_lcs(self, fixture_taxonomy):
        t = fixture_taxonomy
        assert least_common_subsumer(t, "n-car", "n-bicycle").id == "n-wheeled-vehicle"
        assert least_common_subsumer(t, "n-car", "n-factory").id == "n-structure"
        assert least_common_subsumer(t, "n-car", "n-car").id == "n-car"

    def test_pos_mismatch_raises(self, fixture_taxonomy):
        with pytest.raises(PosMismatchError):
            shortest_path_length(fixture_taxonomy, "n-car", "v-run")
        with pytest.raises(PosMismatchError):
            least_common_subsumer(fixture_taxonomy, "n-car", "v-run")

    def test_metric_values(self, fixture_taxonomy):
        t = fixture_taxonomy
        path = synset_similarity("path", t, "n-car", "n-bicycle").value
        lch = synset_similarity("lch", t, "n-car", "n-bicycle").value
        wup = synset_similarity("wup", t, "n-car", "n-bicycle").value
        assert path == pytest.approx(1 / 3, abs=1e-12)
        assert lch == pytest.approx(-math.log(3 / 18), abs=1e-9)
        assert wup == pytest.approx(16 / 18, abs=1e-9)

    def test_identity_special_cases(self, fixture_taxonomy, fixture_ic):
        t, ic = fixture_taxonomy, fixture_ic
        assert synset_similarity("jcn", t, "n-car", "n-car", ic=ic).value == 0.0
        assert ic["n-car"] > 0
        assert synset_similarity("lin", t, "n-car", "n-car", ic=ic).value == 1.0

    def test_metric_polarity(self, fixture_taxonomy, fixture_ic):
        t, ic = fixture_taxonomy, fixture_ic
        for metric in METRICS:
            score = synset_similarity(metric, t, "n-car", "n-bicycle", ic=ic)
            expected = "distance" if metric == "jcn" else "similarity"
            assert score.polarity == expected

    def test_ic_required_for_ic_metrics(self, fixture_taxonomy):
        with pytest.raises(MissingResourceError):
            synset_similarity("res", fixture_taxonomy, "n-car", "n-bicycle")


class TestComputeIc:
    def test_single_synset_root_prob_one(self):
        t = tiny(("a", "n", ("cat",), ()))
        ic = compute_ic(t, {"cat": 5})
        assert ic[t.virtual_root["n"]] == 0.0
        # everything sits under the root, so the lone synset is certain too
        assert ic["a"] == pytest.approx(0.0, abs=1e-12)

    def test_two_leaf_hand_value(self):
        t = tiny(("a", "n", ("leafa",), ()), ("b", "n", ("leafb",), ()))
        ic = compute_ic(t, {"leafa": 1, "leafb": 3})
        assert ic["a"] == pytest.approx(-math.log(0.4), abs=1e-12)
        assert ic["b"] == pytest.approx(-math.log(0.8), abs=1e-12)
        assert ic[t.virtual_root["n"]] == 0.0

    def test_lemma_count_split_between_synsets(self):
        t = tiny(("a", "n", ("bank",), ()), ("b", "n", ("bank",), ()))
        ic = compute_ic(t, {"bank": 4})
        # each synset gets 2; p = 3/5
        assert ic["a"] == pytest.approx(-math.log(3 / 5), abs=1e-12)
        assert ic["a"] == ic["b"]

    def test_empty_counts_error(self, fixture_taxonomy):
        with pytest.raises(WordsimError):
            compute_ic(fixture_taxonomy, {})
        with pytest.raises(WordsimError):
            compute_ic(fixture_taxonomy, {"car": 0})

    def test_antitone_along_parent_edges(self, fixture_taxonomy, fixture_ic):
        t, ic = fixture_taxonomy, fixture_ic
        for sid, syn in t.synsets.items():
            for pid in syn.parents:
                assert ic[sid] >= ic[pid] - 1e-12

    def test_matches_oracle_on_fixture(self, fixture_taxonomy):
        counts = {"car": 10, "bicycle": 7, "factory": 2, "run": 4, "move": 1}
        ic = compute_ic(fixture_taxonomy, counts)
        expected = oracle_ic(fixture_taxonomy, counts)
        for sid, value in expected.items():
            assert ic[sid] == pytest.approx(value, abs=1e-12)


class TestWordLevel:
    def test_multi_synset_takes_best(self, fixture_taxonomy):
        # "car" has two synsets; both are siblings of bicycle here, so the
        # word-level score matches the direct synset score.
        t = fixture_taxonomy
        direct = synset_similarity("path", t, "n-car", "n-bicycle").value
        assert word_similarity("path", t, "car", "bicycle", "n").value == direct

    def test_jcn_takes_minimum(self, fixture_taxonomy, fixture_ic):
        t, ic = fixture_taxonomy, fixture_ic
        values = [
            synset_similarity("jcn", t, s1, s2, ic=ic).value
            for s1 in t.synsets_for("car", "n")
            for s2 in t.synsets_for("factory", "n")
        ]
        got = word_similarity("jcn", t, "car", "factory", "n", ic=ic).value
        assert got == min(values)

    def test_paper_ordering(self, fixture_taxonomy):
        t = fixture_taxonomy
        close = word_similarity("path", t, "car", "bicycle", "n").value
        far = word_similarity("path", t, "car", "factory", "n").value
        assert close == pytest.approx(1 / 3, abs=1e-12)
        assert far == pytest.approx(1 / 8, abs=1e-12)
        assert close > far

    def test_single_synset_word_equals_synset_similarity(self, fixture_taxonomy):
        t = fixture_taxonomy
        got = word_similarity("path", t, "bicycle", "factory", "n").value
        direct = synset_similarity("path", t, "n-bicycle", "n-factory").value
        assert got == direct

    def test_oov_error_names_word(self, fixture_taxonomy):
        with pytest.raises(OutOfVocabularyError) as err:
            word_similarity("path", fixture_taxonomy, "zzz", "car", "n")
        assert "zzz" in str(err.value)

    def test_profile_matches_individual_metrics(self, fixture_taxonomy, fixture_ic):
        t, ic = fixture_taxonomy, fixture_ic
        for w1, w2 in [("car", "bicycle"), ("car", "factory"), ("bike", "mill")]:
            profile = word_metric_profile(t, w1, w2, "n", ic=ic)
            for metric in METRICS:
                single = word_similarity(metric, t, w1, w2, "n", ic=ic)
                assert profile[metric].value == pytest.approx(
                    single.value, abs=1e-12
                )


class TestInvariants:
    def test_symmetry_all_metrics(self, fixture_taxonomy, fixture_ic):
        t, ic = fixture_taxonomy, fixture_ic
        words = ["car", "bicycle", "factory", "building", "structure"]
        for metric in METRICS:
            for w1 in words:
                for w2 in words:
                    a = word_similarity(metric, t, w1, w2, "n", ic=ic).value
                    b = word_similarity(metric, t, w2, w1, "n", ic=ic).value
                    assert a == b

    def test_bounds(self, fixture_taxonomy, fixture_ic):
        t, ic = fixture_taxonomy, fixture_ic
        ids = [s for s in t.synsets if t.synsets[s].pos == "n"]
        big_d = t.max_depth("n")
        for s1 in ids:
            for s2 in ids:
                d = shortest_path_length(t, s1, s2)
                path = synset_similarity("path", t, s1, s2).value
                wup = synset_similarity("wup", t, s1, s2).value
                res = synset_similarity("res", t, s1, s2, ic=ic).value
                jcn = synset_similarity("jcn", t, s1, s2, ic=ic).value
                lin = synset_similarity("lin", t, s1, s2, ic=ic).value
                lch = synset_similarity("lch", t, s1, s2, ic=ic).value
                assert 0 < path <= 1
                assert 0 < wup <= 1
                assert res >= 0
                assert jcn >= -1e-12
                assert 0 <= lin <= 1 + 1e-12
                if d + 1 < 2 * big_d:
                    assert lch > 0

    def test_path_identity_is_max(self, fixture_taxonomy):
        t = fixture_taxonomy
        assert synset_similarity("path", t, "n-car", "n-car").value == 1.0

    @given(d1=st.integers(0, 30), d2=st.integers(0, 30))
    def test_path_monotone_in_distance(self, d1, d2):
        if d1 < d2:
            assert 1 / (d1 + 1) > 1 / (d2 + 1)

    def test_lch_monotone_in_distance(self, fixture_taxonomy):
        t = fixture_taxonomy
        pairs = [("n-car", "n-car"), ("n-car", "n-bicycle"), ("n-car", "n-factory")]
        values = [synset_similarity("lch", t, a, b).value for a, b in pairs]
        assert values[0] > values[1] > values[2]


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_oracle_equivalence_random_taxonomies(seed):
    rng = np.random.default_rng(seed)
    t = random_taxonomy(rng, max_synsets=25)
    dists = oracle_all_pairs_distances(t)
    depths = oracle_depths(t)
    ancestors = oracle_ancestor_sets(t)
    counts = {
        lemma: float(rng.integers(1, 20)) for (lemma, _pos) in t.lemma_index
    }
    ic = compute_ic(t, counts)
    expected_ic = oracle_ic(t, counts)
    ids = sorted(t.synsets)
    for sid in ids:
        assert synset_depth(t, sid) == depths[sid]
        assert ic[sid] == pytest.approx(expected_ic[sid], abs=1e-12)
    check = ids if len(ids) <= 12 else ids[:: max(1, len(ids) // 12)]
    big_d = max(depths.values())
    for s1 in check:
        for s2 in check:
            d = shortest_path_length(t, s1, s2)
            assert d == dists[s1][s2]
            lcs = least_common_subsumer(t, s1, s2).id
            assert lcs == oracle_lcs(t, s1, s2, ancestors, depths)
            got = {
                m: synset_similarity(m, t, s1, s2, ic=ic).value for m in METRICS
            }
            assert got["path"] == pytest.approx(1 / (d + 1), abs=1e-12)
            assert got["lch"] == pytest.approx(
                -math.log((d + 1) / (2 * big_d)), abs=1e-12
            )
            assert got["wup"] == pytest.approx(
                2 * depths[lcs] / (depths[s1] + depths[s2]), abs=1e-12
            )
            assert got["res"] == pytest.approx(expected_ic[lcs], abs=1e-12)
            assert got["jcn"] == pytest.approx(
                expected_ic[s1] + expected_ic[s2] - 2 * expected_ic[lcs],
                abs=1e-12,
            )
            denom = expected_ic[s1] + expected_ic[s2]
            expected_lin = 0.0 if denom == 0 else 2 * expected_ic[lcs] / denom
            assert got["lin"] == pytest.approx(expected_lin, abs=1e-12)
