import math

import numpy as np
import pytest

from warpgate.catalog import ColumnRef
from warpgate.embedder import cosine
from warpgate.errors import (
    ConfigMismatch,
    CorruptFile,
    DimensionMismatch,
    InvalidSpec,
    VersionMismatch,
)
from warpgate.lsh import (
    FORMAT_VERSION,
    HyperplaneSet,
    LshConfig,
    LshIndex,
    collision_probability,
    estimate_similarity,
    load_index,
    save_index,
    signature,
)


def ref(i):
    return ColumnRef(f"{i:016x}", f"col{i}", 0)


def unit(rng, dim):
    v = rng.normal(size=dim)
    return v / np.linalg.norm(v)


def pair_with_cosine(rng, dim, c):
    u = unit(rng, dim)
    w = rng.normal(size=dim)
    w -= w.dot(u) * u
    w /= np.linalg.norm(w)
    return u, c * u + math.sqrt(1.0 - c * c) * w


def test_config_validation():
    with pytest.raises(InvalidSpec):
        LshConfig(num_tables=0)
    with pytest.raises(InvalidSpec):
        LshConfig(bits_per_table=65)
    with pytest.raises(InvalidSpec):
        LshConfig(similarity_threshold=1.0)
    cfg = LshConfig()
    assert (cfg.num_tables, cfg.bits_per_table) == (16, 10)


def test_default_banding_meets_collision_bounds():
    # the frozen defaults must satisfy both documented bounds
    assert collision_probability(0.7, 16, 10) >= 0.45
    assert collision_probability(0.9, 16, 10) >= 0.97


def test_hand_signature_key():
    # planes e1 and -e1, query along e1: bits (1, 0), MSB first -> key 2
    cfg = LshConfig(num_tables=1, bits_per_table=2, dimension=3)
    hp = HyperplaneSet(cfg)
    hp.matrix = np.array([[1.0, 0, 0], [-1.0, 0, 0]])
    e1 = np.array([1.0, 0.0, 0.0])
    assert signature(e1, hp).per_table_keys == (2,)
    # zero dots count as positive: orthogonal vector gets all ones
    e2 = np.array([0.0, 1.0, 0.0])
    assert signature(e2, hp).per_table_keys == (3,)
    assert signature(-e1, hp).per_table_keys == (1,)


def test_hyperplanes_are_seeded():
    a = HyperplaneSet(LshConfig(hyperplane_seed=7))
    b = HyperplaneSet(LshConfig(hyperplane_seed=7))
    c = HyperplaneSet(LshConfig(hyperplane_seed=8))
    assert np.array_equal(a.matrix, b.matrix)
    assert not np.array_equal(a.matrix, c.matrix)
    assert a.planes.shape == (16, 10, 128)


def test_estimate_similarity_exact_ends():
    cfg = LshConfig(num_tables=4, bits_per_table=8, dimension=16)
    hp = HyperplaneSet(cfg)
    rng = np.random.default_rng(5)
    v = unit(rng, 16)
    sv = signature(v, hp)
    assert estimate_similarity(sv, sv) == pytest.approx(1.0)
    sneg = signature(-v, hp)
    assert estimate_similarity(sv, sneg) == pytest.approx(-1.0)


def test_estimate_similarity_config_mismatch():
    cfg_a = LshConfig(num_tables=2, bits_per_table=4, dimension=8)
    cfg_b = LshConfig(num_tables=2, bits_per_table=5, dimension=8)
    rng = np.random.default_rng(0)
    v = unit(rng, 8)
    with pytest.raises(ConfigMismatch):
        estimate_similarity(
            signature(v, HyperplaneSet(cfg_a)), signature(v, HyperplaneSet(cfg_b))
        )


def test_estimate_similarity_tracks_cosine():
    # 64 x 64 = 4096 sign bits: estimates land within 0.05 of the true cosine
    cfg = LshConfig(num_tables=64, bits_per_table=64, dimension=64, hyperplane_seed=3)
    hp = HyperplaneSet(cfg)
    rng = np.random.default_rng(12)
    for target in (-0.5, 0.0, 0.4, 0.7, 0.9, 0.99):
        u, v = pair_with_cosine(rng, 64, target)
        est = estimate_similarity(signature(u, hp), signature(v, hp))
        assert abs(est - cosine(u, v)) < 0.05


def test_estimate_rank_correlates_with_cosine():
    scipy_stats = pytest.importorskip("scipy.stats")
    cfg = LshConfig(num_tables=64, bits_per_table=64, dimension=32, hyperplane_seed=9)
    hp = HyperplaneSet(cfg)
    rng = np.random.default_rng(21)
    true_cos, est = [], []
    for i in range(200):
        u, v = pair_with_cosine(rng, 32, rng.uniform(-0.9, 0.99))
        true_cos.append(cosine(u, v))
        est.append(estimate_similarity(signature(u, hp), signature(v, hp)))
    rho = scipy_stats.spearmanr(true_cos, est).statistic
    assert rho >= 0.95


def test_collision_law_monte_carlo():
    # empirical >= 1-table collision rate vs the closed form, 3 sigma band
    L, b, dim, trials, target = 8, 6, 24, 400, 0.8
    rng = np.random.default_rng(31)
    hits = 0
    for seed in range(trials):
        hp = HyperplaneSet(
            LshConfig(num_tables=L, bits_per_table=b, dimension=dim, hyperplane_seed=seed)
        )
        u, v = pair_with_cosine(rng, dim, target)
        su, sv = signature(u, hp), signature(v, hp)
        if any(a == c for a, c in zip(su.per_table_keys, sv.per_table_keys)):
            hits += 1
    expected = collision_probability(target, L, b)
    sigma = math.sqrt(expected * (1 - expected) / trials)
    assert abs(hits / trials - expected) <= 3 * sigma


def test_query_candidates_matches_signature_scan():
    cfg = LshConfig(num_tables=6, bits_per_table=8, dimension=16, hyperplane_seed=2)
    index = LshIndex(cfg, {"kind": "test"})
    rng = np.random.default_rng(8)
    vecs = {ref(i): unit(rng, 16) for i in range(500)}
    for r, v in vecs.items():
        index.insert(r, v)

    q = unit(rng, 16)
    sq = index.signature_of(q)
    expected = {
        r
        for r, v in vecs.items()
        if any(a == c for a, c in zip(sq.per_table_keys, index.signature_of(v).per_table_keys))
    }
    assert index.query_candidates(q) == expected
    assert len(expected) < 500  # the banding actually prunes


def test_insert_validates_dimension():
    index = LshIndex(LshConfig(dimension=8), {})
    with pytest.raises(DimensionMismatch):
        index.insert(ref(1), np.zeros(9))
    with pytest.raises(DimensionMismatch):
        index.query_candidates(np.zeros(9))


def test_reinsert_replaces_and_warns(caplog):
    cfg = LshConfig(num_tables=2, bits_per_table=4, dimension=8)
    index = LshIndex(cfg, {})
    rng = np.random.default_rng(3)
    r = ref(7)
    index.insert(r, unit(rng, 8))
    with caplog.at_level("WARNING"):
        index.insert(r, unit(rng, 8))
    assert any("re-insert" in rec.message for rec in caplog.records)
    assert len(index) == 1
    # exactly one bucket entry per table survives
    for table in index.tables:
        assert sum(refs.count(r) for refs in table.values()) == 1


def test_remove():
    cfg = LshConfig(num_tables=2, bits_per_table=4, dimension=8)
    index = LshIndex(cfg, {})
    rng = np.random.default_rng(4)
    r1, r2 = ref(1), ref(2)
    index.insert(r1, unit(rng, 8))
    index.insert(r2, unit(rng, 8))
    index.remove(r1)
    index.remove(r1)  # idempotent
    assert len(index) == 1
    assert all(r1 not in refs for table in index.tables for refs in table.values())


def _small_index():
    cfg = LshConfig(num_tables=3, bits_per_table=5, dimension=8, hyperplane_seed=11)
    index = LshIndex(cfg, {"kind": "hashing", "dimension": 8})
    rng = np.random.default_rng(17)
    for i in range(20):
        index.insert(ref(i), unit(rng, 8))
    return index


def test_save_load_roundtrip(tmp_path):
    index = _small_index()
    path = tmp_path / "idx.json"
    save_index(index, path, extras={"note": "x"})
    loaded = load_index(path)
    assert loaded.config == index.config
    assert loaded.extras == {"note": "x"}
    assert set(loaded.vectors) == set(index.vectors)
    for r, v in index.vectors.items():
        assert loaded.vectors[r].tobytes() == v.tobytes()
    for t_orig, t_loaded in zip(index.tables, loaded.tables):
        assert {k: list(v) for k, v in t_orig.items()} == t_loaded

    # loading and re-saving reproduces the file byte for byte
    path2 = tmp_path / "idx2.json"
    save_index(loaded, path2, extras={"note": "x"})
    assert path.read_bytes() == path2.read_bytes()


def test_load_rejects_tampering(tmp_path):
    index = _small_index()
    path = tmp_path / "idx.json"
    save_index(index, path)
    text = path.read_text()
    path.write_text(text.replace('"col1"', '"colX"', 1))
    with pytest.raises(CorruptFile):
        load_index(path)


def test_load_rejects_bad_version(tmp_path):
    import json

    index = _small_index()
    path = tmp_path / "idx.json"
    save_index(index, path)
    doc = json.loads(path.read_text())
    doc["format_version"] = FORMAT_VERSION + 1
    path.write_text(json.dumps(doc))
    with pytest.raises(VersionMismatch):
        load_index(path)


def test_load_rejects_garbage(tmp_path):
    path = tmp_path / "junk.json"
    path.write_text("{not json")
    with pytest.raises(CorruptFile):
        load_index(path)
    path.write_text('{"no_version": true}')
    with pytest.raises(CorruptFile):
        load_index(path)


def test_load_checks_expected_dimension(tmp_path):
    index = _small_index()
    path = tmp_path / "idx.json"
    save_index(index, path)
    with pytest.raises(ConfigMismatch):
        load_index(path, expected_dimension=128)
    load_index(path, expected_dimension=8)
