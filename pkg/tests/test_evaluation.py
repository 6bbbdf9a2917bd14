import csv

import pytest

from warpgate.catalog import Catalog, ColumnRef
from warpgate.engine import DiscoveryEngine, JoinCandidate
from warpgate.errors import InvalidSpec, MalformedRow
from warpgate.evaluation import (
    GroundTruthSet,
    evaluate_engine,
    load_ground_truth,
    measure_timing,
    precision_recall_at_k,
    sampling_ablation,
)
from warpgate.sampling import SampleSpec
from warpgate.testbed import TestbedSpec, generate_testbed


def cand(name, score, table="t", tid="00" * 8):
    ref = ColumnRef(tid, name, 0)
    return JoinCandidate(column=ref, table_name=table, database="db", score=score)


def test_precision_recall_hand_enumerated():
    answers = frozenset(
        {ColumnRef("00" * 8, "a", 0), ColumnRef("00" * 8, "b", 0)}
    )
    results = [cand("a", 0.9), cand("x", 0.8), cand("b", 0.75)]
    # k=1: top-1 is a hit -> p=1/1, r=1/2
    assert precision_recall_at_k(results, answers, 1) == (1.0, 0.5)
    # k=2: one hit of two returned -> p=1/2, r=1/2
    assert precision_recall_at_k(results, answers, 2) == (0.5, 0.5)
    # k=3: two hits of three -> p=2/3, r=1
    p, r = precision_recall_at_k(results, answers, 3)
    assert p == pytest.approx(2 / 3)
    assert r == 1.0
    # k=5 with only 3 returned divides precision by 3, not 5
    p, r = precision_recall_at_k(results, answers, 5)
    assert p == pytest.approx(2 / 3)
    assert r == 1.0


def test_precision_recall_empty_results():
    answers = frozenset({ColumnRef("00" * 8, "a", 0)})
    assert precision_recall_at_k([], answers, 10) == (0.0, 0.0)


@pytest.fixture(scope="module")
def bed(tmp_path_factory):
    out = tmp_path_factory.mktemp("bed")
    spec = TestbedSpec(
        num_tables=4,
        columns_per_table=3,
        rows_per_table=120,
        planted_pairs=4,
        seed=13,
    )
    result = generate_testbed(spec, out)
    catalog = Catalog()
    report = catalog.register_corpus(result.corpus_dir)
    assert not report.rejected
    return result, catalog


def test_load_ground_truth(bed):
    result, catalog = bed
    truth = load_ground_truth(result.truth_path, catalog)
    assert truth.dropped == 0
    # both directions of each planted pair
    assert len(truth.entries) == 8
    for ref, answers in truth.entries:
        assert isinstance(ref, ColumnRef)
        assert len(answers) >= 1


def test_load_ground_truth_drops_unresolvable(bed, tmp_path):
    result, catalog = bed
    path = tmp_path / "truth.csv"
    rows = list(csv.reader(open(result.truth_path)))
    rows.append(["no_such_table", "x", rows[1][2], rows[1][3]])
    with open(path, "w", newline="") as fh:
        csv.writer(fh).writerows(rows)
    truth = load_ground_truth(path, catalog)
    assert truth.dropped == 1
    assert len(truth.entries) == 8


def test_load_ground_truth_rejects_bad_header(tmp_path):
    path = tmp_path / "truth.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(MalformedRow):
        load_ground_truth(path, Catalog())


def test_evaluate_engine_structure(bed):
    result, catalog = bed
    engine = DiscoveryEngine.build(catalog)
    truth = load_ground_truth(result.truth_path, catalog)
    report = evaluate_engine(engine, truth, ks=(1, 5, 10), label="demo")
    assert report.num_queries == 8
    assert set(report.precision) == {1, 5, 10}
    assert report.recall[10] >= report.recall[1]
    assert 0.0 <= report.precision[1] <= 1.0
    assert report.timing.mean_end_to_end_s > 0
    assert len(report.per_query) == 8
    d = report.to_dict()
    assert d["label"] == "demo"
    assert set(d["precision"]) == {"1", "5", "10"}
    with pytest.raises(InvalidSpec):
        evaluate_engine(engine, truth, ks=())


def test_sampling_ablation(bed):
    result, catalog = bed
    truth = load_ground_truth(result.truth_path, catalog)
    ablation = sampling_ablation(catalog, truth, sizes=(10, 50), ks=(1, 10))
    assert list(ablation.runs) == ["full", "10", "50"]
    assert set(ablation.deltas) == {"10", "50"}
    for label in ("10", "50"):
        run = ablation.runs[label]
        assert run.ks == [1, 10]
        for k in (1, 10):
            delta = ablation.deltas[label]["recall"][k]
            assert delta == pytest.approx(
                run.recall[k] - ablation.runs["full"].recall[k]
            )
    d = ablation.to_dict()
    assert d["baseline"] == "full"
    assert set(d["runs"]) == {"full", "10", "50"}


def test_ablation_report_files(bed, tmp_path):
    result, catalog = bed
    truth = load_ground_truth(result.truth_path, catalog)
    ablation = sampling_ablation(catalog, truth, sizes=(10,), ks=(10,))
    jpath = tmp_path / "report.json"
    cpath = tmp_path / "report.csv"
    ablation.save_json(jpath)
    ablation.save_csv(cpath)
    import json

    data = json.loads(jpath.read_text())
    assert data["runs"]["10"]["recall"]["10"] is not None
    rows = list(csv.reader(open(cpath)))
    assert rows[0] == ["size", "k", "precision", "recall", "mean_lookup_s", "mean_end_to_end_s"]
    assert len(rows) == 3  # header + full + size-10


def test_measure_timing(bed):
    result, catalog = bed
    engine = DiscoveryEngine.build(catalog)
    truth = load_ground_truth(result.truth_path, catalog)
    queries = [ref for ref, _ in truth.entries[:4]]
    report = measure_timing(engine, queries, repeats=3)
    assert report.repeats == 3
    assert report.num_queries == 4
    assert report.mean_lookup_s <= report.mean_end_to_end_s
    assert report.cov_lookup >= 0.0
    assert report.cov_end_to_end >= 0.0
    d = report.to_dict()
    assert d["decomposition"]["mean_embed_s"] > 0
    with pytest.raises(InvalidSpec):
        measure_timing(engine, [], repeats=1)
