import numpy as np

from warpgate.engine import DiscoveryEngine, SearchParams
from warpgate.oracle import _fsum_cosine, brute_force_topk
from warpgate.sampling import SampleSpec

FULL = SampleSpec(strategy="full", size=0)


def test_fsum_cosine_agrees_with_numpy():
    rng = np.random.default_rng(2)
    for _ in range(20):
        u, v = rng.normal(size=32), rng.normal(size=32)
        expected = float(u @ v / (np.linalg.norm(u) * np.linalg.norm(v)))
        assert abs(_fsum_cosine(u, v) - expected) < 1e-12
    assert _fsum_cosine(np.zeros(4), np.ones(4)) == 0.0


def test_oracle_matches_engine_on_small_corpus(engine, catalog):
    """With this few columns the LSH path returns every eligible column, so
    the engine must agree with the exhaustive scan exactly."""
    params = SearchParams(k=10, min_score=0.7)
    for ref in catalog.all_columns():
        got = engine.search_topk(ref, params)
        want = brute_force_topk(
            ref,
            catalog,
            engine.embedder,
            sample_spec=FULL,
            k=10,
            min_score=0.7,
        )
        got_keys = [(c.column, round(c.score, 9)) for c in got]
        want_keys = [(c.column, round(c.score, 9)) for c in want]
        # the oracle sees all columns; the engine only LSH collisions.
        # candidates this far above threshold always collide, so the
        # lists agree outright on this corpus
        assert got_keys == want_keys


def test_oracle_raw_values(engine, catalog):
    values = ["ada@example.com", "lin@example.com"]
    want = brute_force_topk(
        values, catalog, engine.embedder, sample_spec=FULL, min_score=0.6
    )
    names = [(c.table_name, c.column.column_name) for c in want]
    assert ("users", "email") in names
    assert ("contacts", "mail") in names
    # scores sorted descending, ties broken lexicographically
    scores = [c.score for c in want]
    assert scores == sorted(scores, reverse=True)
