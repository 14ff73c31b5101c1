import pytest

from app.services.reproductions import example1, example2, figure1, run_example


@pytest.fixture(scope="module")
def first():
    return example1()


@pytest.fixture(scope="module")
def second():
    return example2()


def test_figure_report():
    report = figure1()
    record = report.to_record()
    assert record["count"] == 3
    assert record["volume"]["proof"] == {"exact": "4"}
    assert record["embedded_lattice_vertices"] == [[["-1", "0"]], [["1", "0"]]]


def test_example1_pairs(first):
    assert len(first.table) == 6
    assert sum(entry.volume_zero for entry in first.table) == 4
    overlapping = {tuple(first.simplex_labels[i] for i in entry.pair) for entry in first.table if not entry.volume_zero}
    assert overlapping == {("abc", "bcd"), ("abd", "acd")}
    assert len(first.selection) == 2
    assert not first.all_pairs_disjoint


def test_example1_has_an_uncovered_point(first):
    assert first.witness is not None
    assert first.witness_verified()
    assert first.to_record()["witness_verified"]


def test_example2(second):
    assert [entry.pair for entry in second.table if entry.volume_zero] == [(0, 2), (1, 3)]
    assert second.selection == [0, 2]
    assert second.every_triple_overlaps
    assert (second.certificate.k, second.certificate.m) == (2, 2)
    assert second.certificate.holds


def test_example_record(second):
    record = second.to_record()
    assert record["simplices"] == ["abc", "abd", "acd", "bcd"]
    assert record["pairs_volume_zero"] == 2
    assert all(len(pair["place_overlaps"]) == 2 for pair in record["pairs"])


def test_unknown_example():
    with pytest.raises(ValueError):
        run_example("example3")
