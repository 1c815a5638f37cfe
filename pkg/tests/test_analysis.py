from collections import Counter

import pytest

from classlm.analysis import (
    coverage_curve,
    frequency_overlap,
    label_nus,
    nus_of,
    partial_training_sweep,
    read_labeled_corpus,
    saturation_table,
    unseen_split,
    write_coverage_csv,
    write_overlap_csv,
    write_saturation_csv,
    write_sweep_csv,
    write_unseen_csv,
)
from classlm.errors import CorpusError
from classlm.lm import perplexity


def test_read_labeled_corpus(tmp_path):
    path = tmp_path / "corpus.tsv"
    path.write_text("City\tfrom naples\n\nTime\tat five\n", encoding="utf-8")
    assert read_labeled_corpus(path) == [("City", "from naples"), ("Time", "at five")]


def test_read_labeled_corpus_rejects_unknown_group(tmp_path):
    path = tmp_path / "corpus.tsv"
    path.write_text("Weather\tsunny\n", encoding="utf-8")
    with pytest.raises(CorpusError, match=":1:"):
        read_labeled_corpus(path)


def test_read_labeled_corpus_requires_tab(tmp_path):
    path = tmp_path / "corpus.tsv"
    path.write_text("City from naples\n", encoding="utf-8")
    with pytest.raises(CorpusError):
        read_labeled_corpus(path)


def test_coverage_single_repeated_nu():
    nu = ("a", "b")
    curve = coverage_curve([nu] * 7, [nu] * 7)
    assert curve.points[0] == (1, 1.0)


def test_coverage_self_final_point_is_one(splits):
    nus = splits["nus"]["tune"]
    curve = coverage_curve(nus, nus)
    assert curve.points[-1][1] == pytest.approx(1.0)
    ranks = [r for r, _ in curve.points]
    assert ranks == list(range(1, len(set(nus)) + 1))


def test_coverage_monotone_and_matches_recount(splits):
    ranking = splits["nus"]["train"]
    measured = splits["nus"]["test"]
    curve = coverage_curve(ranking, measured)
    values = [cov for _, cov in curve.points]
    assert all(b >= a for a, b in zip(values, values[1:]))
    # independent recount: sort by (-count, nu) and accumulate by hand
    counts = Counter(ranking)
    order = sorted(counts, key=lambda nu: (-counts[nu], nu))
    measured_counts = Counter(measured)
    running = 0
    for rank, nu in enumerate(order, start=1):
        running += measured_counts.get(nu, 0)
        assert curve.points[rank - 1] == (rank, running / len(measured))


def test_coverage_rejects_empty_ranking():
    with pytest.raises(CorpusError):
        coverage_curve([], [("a",)])


def test_coverage_at_helper():
    curve = coverage_curve([("a",), ("a",), ("b",)], [("a",), ("b",)])
    assert curve.coverage_at(1) == pytest.approx(0.5)
    assert curve.coverage_at(99) == pytest.approx(1.0)
    assert curve.coverage_at(0) == 0.0


def test_sweep_deterministic_and_validated(splits, lexicon):
    labeled = splits["labeled"]["train"][:400]
    test = splits["labeled"]["test"]
    rows = partial_training_sweep(labeled, [200, 400], test, lexicon, 3)
    again = partial_training_sweep(labeled, [200, 400], test, lexicon, 3)
    assert [(s, {g: r.pp for g, r in per.items()}) for s, per in rows] == [
        (s, {g: r.pp for g, r in per.items()}) for s, per in again
    ]
    repeated = partial_training_sweep(labeled, [400, 400], test, lexicon, 3)
    assert {g: r.pp for g, r in repeated[0][1].items()} == {
        g: r.pp for g, r in repeated[1][1].items()
    }
    with pytest.raises(CorpusError):
        partial_training_sweep(labeled, [400, 200], test, lexicon, 3)
    with pytest.raises(CorpusError):
        partial_training_sweep(labeled, [401], test, lexicon, 3)
    with pytest.raises(CorpusError):
        partial_training_sweep(labeled, [], test, lexicon, 3)


def test_unseen_split_edges():
    train = [("a",), ("b",)]
    assert unseen_split(train, [("a",), ("b",), ("a",)]).unseen == ()
    split = unseen_split(train, [("c",), ("c",), ("d",)])
    assert split.seen == ()
    assert split.unseen_types == 2
    assert len(split.unseen) == 3


def test_unseen_part_scores_worse(model_full, splits):
    split = unseen_split(splits["nus"]["train"], splits["nus"]["test"])
    assert split.seen and split.unseen
    pp_seen = perplexity(model_full, list(split.seen)).pp
    pp_unseen = perplexity(model_full, list(split.unseen)).pp
    assert pp_unseen > pp_seen


def test_saturation_full_size_row(splits):
    labeled = splits["labeled"]["train"]
    sizes = [500, len(labeled)]
    table = saturation_table(labeled, sizes, min_count=3)
    counts = {}
    for group, nu in labeled:
        counts.setdefault(group, Counter())[nu] += 1
    for group, row in table.items():
        frequent = {nu for nu, c in counts[group].items() if c > 3}
        assert row[-1] == len(frequent)
        assert row == sorted(row)  # prefix property: non-decreasing


def test_saturation_min_count_strictness():
    labeled = [("City", ("a",))] * 4 + [("City", ("b",))] * 3
    table = saturation_table(labeled, [7], min_count=3)
    assert table["City"] == [1]  # count > 3 means four occurrences or more


def test_frequency_overlap_identical_corpora():
    labeled = [("City", ("a",))] * 5 + [("City", ("b",))] * 5
    assert frequency_overlap(labeled, labeled) == {"City": 1.0}


def test_frequency_overlap_threshold_one_excludes_everything():
    labeled = [("City", ("a",))] * 5
    assert frequency_overlap(labeled, labeled, threshold=1.0) == {"City": 0.0}


def test_frequency_overlap_groups_independent():
    train = [("City", ("a",))] * 10 + [("Time", ("b",))]
    test = [("City", ("a",)), ("Time", ("b",)), ("Time", ("c",))]
    overlap = frequency_overlap(train, test)
    assert overlap["City"] == 1.0
    assert overlap["Time"] == 0.5


def test_csv_writers_are_deterministic(tmp_path, splits, lexicon):
    labeled = splits["labeled"]["train"][:300]
    test = splits["labeled"]["test"]
    curve = coverage_curve(nus_of(labeled), nus_of(test))
    rows = partial_training_sweep(labeled, [150, 300], test, lexicon, 2)
    sat = saturation_table(labeled, [150, 300])
    overlap = frequency_overlap(labeled, test)
    split = unseen_split(nus_of(labeled), nus_of(test))
    for name, writer, payload in (
        ("coverage", write_coverage_csv, curve),
        ("sweep", write_sweep_csv, rows),
        ("overlap", write_overlap_csv, overlap),
        ("unseen", write_unseen_csv, split),
    ):
        first, second = tmp_path / f"{name}1.csv", tmp_path / f"{name}2.csv"
        writer(first, payload)
        writer(second, payload)
        assert first.read_bytes() == second.read_bytes(), name
    a, b = tmp_path / "sat1.csv", tmp_path / "sat2.csv"
    write_saturation_csv(a, [150, 300], sat)
    write_saturation_csv(b, [150, 300], sat)
    assert a.read_bytes() == b.read_bytes()


def test_label_nus_applies_lexicon(tiny_lexicon):
    rows = [("City", "from naples to new york")]
    labeled = label_nus(tiny_lexicon, rows)
    assert labeled == [("City", ("from", "CITY-NAME", "to", "CITY-NAME"))]
