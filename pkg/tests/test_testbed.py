import csv
import hashlib
from pathlib import Path

import pytest

from warpgate.catalog import Catalog
from warpgate.errors import InvalidSpec
from warpgate.testbed import NoiseProfile, TestbedSpec, generate_testbed


def tree_digest(root: Path) -> str:
    h = hashlib.sha256()
    for path in sorted(root.rglob("*")):
        if path.is_file():
            h.update(path.relative_to(root).as_posix().encode())
            h.update(path.read_bytes())
    return h.hexdigest()


def test_spec_validation():
    with pytest.raises(InvalidSpec):
        TestbedSpec(num_tables=0)
    with pytest.raises(InvalidSpec):
        TestbedSpec(planted_pairs=-1)
    with pytest.raises(InvalidSpec):
        # 2 pairs need 4 columns; 1x3 corpus has 3
        TestbedSpec(num_tables=1, columns_per_table=3, planted_pairs=2)
    with pytest.raises(InvalidSpec):
        # pairs are cross-table
        TestbedSpec(num_tables=1, columns_per_table=10, planted_pairs=2)
    with pytest.raises(InvalidSpec):
        TestbedSpec(containment_min=0.8, containment_max=0.5)
    with pytest.raises(InvalidSpec):
        NoiseProfile(case_flip=1.5)


def test_zero_pairs(tmp_path):
    spec = TestbedSpec(
        num_tables=2, columns_per_table=2, rows_per_table=30, planted_pairs=0, seed=1
    )
    result = generate_testbed(spec, tmp_path)
    assert result.pairs == []
    rows = list(csv.reader(open(result.truth_path)))
    assert rows == [["query_table", "query_column", "answer_table", "answer_column"]]
    cat = Catalog()
    report = cat.register_corpus(result.corpus_dir)
    assert report.table_count == 2


def test_generation_is_byte_identical(tmp_path):
    spec = TestbedSpec(
        num_tables=3, columns_per_table=2, rows_per_table=50, planted_pairs=2, seed=5
    )
    r1 = generate_testbed(spec, tmp_path / "a")
    r2 = generate_testbed(spec, tmp_path / "b")
    assert tree_digest(tmp_path / "a") == tree_digest(tmp_path / "b")
    assert r1.pairs == r2.pairs
    r3 = generate_testbed(
        TestbedSpec(
            num_tables=3, columns_per_table=2, rows_per_table=50, planted_pairs=2, seed=6
        ),
        tmp_path / "c",
    )
    assert tree_digest(tmp_path / "a") != tree_digest(tmp_path / "c")


def test_pairs_are_cross_table(tmp_path):
    spec = TestbedSpec(
        num_tables=5, columns_per_table=4, rows_per_table=40, planted_pairs=10, seed=3
    )
    result = generate_testbed(spec, tmp_path)
    assert len(result.pairs) == 10
    for (ta, ca), (tb, cb) in result.pairs:
        assert ta != tb
    truth_rows = list(csv.reader(open(result.truth_path)))[1:]
    assert len(truth_rows) == 20  # both directions
    forward = {tuple(r) for r in truth_rows}
    for q_table, q_col, a_table, a_col in list(forward):
        assert (a_table, a_col, q_table, q_col) in forward


def test_tables_parse_and_have_shape(tmp_path):
    spec = TestbedSpec(
        num_tables=3, columns_per_table=4, rows_per_table=25, planted_pairs=3, seed=9
    )
    result = generate_testbed(spec, tmp_path)
    cat = Catalog()
    report = cat.register_corpus(result.corpus_dir)
    assert not report.rejected
    assert report.table_count == 3
    for meta in cat.tables.values():
        assert meta.row_count == 25
        assert len(meta.column_names) == 4


def test_noise_profile_affects_bytes(tmp_path):
    base = dict(num_tables=2, columns_per_table=2, rows_per_table=40, planted_pairs=1, seed=4)
    generate_testbed(TestbedSpec(**base), tmp_path / "clean")
    noisy = TestbedSpec(
        **base, noise=NoiseProfile(case_flip=0.9, punctuation=0.9, affix=0.9)
    )
    generate_testbed(noisy, tmp_path / "noisy")
    assert tree_digest(tmp_path / "clean") != tree_digest(tmp_path / "noisy")
