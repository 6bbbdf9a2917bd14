"""Evaluation harness: ground truth, precision/recall@k, ablations, timing.

Ground truth lives in a CSV with header
``query_table,query_column,answer_table,answer_column``; rows naming
tables or columns absent from the catalog are dropped (and counted) so a
truth file can outlive corpus edits. Metrics are macro-averaged over
queries. precision@k divides by min(k, returned) and is 0 when nothing
came back; recall@k divides by the answer-set size.
"""

from __future__ import annotations

import csv
import json
import statistics
from dataclasses import dataclass, field
from pathlib import Path

from .catalog import Catalog, ColumnRef
from .embedder import EmbedderConfig
from .engine import DiscoveryEngine, JoinCandidate, SearchParams
from .errors import InvalidSpec, MalformedRow
from .lsh import LshConfig
from .sampling import SampleSpec

TRUTH_HEADER = ["query_table", "query_column", "answer_table", "answer_column"]


@dataclass
class GroundTruthSet:
    entries: list[tuple[ColumnRef, frozenset[ColumnRef]]]
    dropped: int = 0

    def __len__(self) -> int:
        return len(self.entries)


def load_ground_truth(path, catalog: Catalog) -> GroundTruthSet:
    path = Path(path)
    grouped: dict[ColumnRef, set[ColumnRef]] = {}
    order: list[ColumnRef] = []
    dropped = 0
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != TRUTH_HEADER:
            raise MalformedRow(
                path, 1, f"expected header {','.join(TRUTH_HEADER)}"
            )
        for row_number, row in enumerate(reader, start=2):
            if len(row) != 4:
                raise MalformedRow(path, row_number, f"expected 4 fields, got {len(row)}")
            try:
                q_meta = catalog.table_by_name(row[0])
                a_meta = catalog.table_by_name(row[2])
                q_ref = catalog.column_ref(q_meta.table_id, row[1])
                a_ref = catalog.column_ref(a_meta.table_id, row[3])
            except Exception:
                dropped += 1
                continue
            if q_ref not in grouped:
                grouped[q_ref] = set()
                order.append(q_ref)
            grouped[q_ref].add(a_ref)
    return GroundTruthSet(
        entries=[(ref, frozenset(grouped[ref])) for ref in order],
        dropped=dropped,
    )


def precision_recall_at_k(
    results: list[JoinCandidate], answers: frozenset[ColumnRef], k: int
) -> tuple[float, float]:
    top = results[:k]
    if not top:
        return 0.0, 0.0
    hits = sum(1 for c in top if c.column in answers)
    precision = hits / min(k, len(top))
    recall = hits / len(answers) if answers else 0.0
    return precision, recall


@dataclass
class TimingSummary:
    mean_sample_s: float = 0.0
    mean_embed_s: float = 0.0
    mean_lookup_s: float = 0.0
    mean_rank_s: float = 0.0
    mean_end_to_end_s: float = 0.0

    def to_dict(self) -> dict:
        return {
            "mean_sample_s": self.mean_sample_s,
            "mean_embed_s": self.mean_embed_s,
            "mean_lookup_s": self.mean_lookup_s,
            "mean_rank_s": self.mean_rank_s,
            "mean_end_to_end_s": self.mean_end_to_end_s,
        }


@dataclass
class MetricsReport:
    label: str
    ks: list[int]
    precision: dict[int, float]
    recall: dict[int, float]
    num_queries: int
    per_query: list[dict] = field(default_factory=list)
    timing: TimingSummary | None = None

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "num_queries": self.num_queries,
            "precision": {str(k): self.precision[k] for k in self.ks},
            "recall": {str(k): self.recall[k] for k in self.ks},
            "timing": self.timing.to_dict() if self.timing else None,
            "per_query": self.per_query,
        }


def evaluate_engine(
    engine: DiscoveryEngine,
    truth: GroundTruthSet,
    ks: tuple[int, ...] = (1, 5, 10),
    min_score: float | None = None,
    exclude_query_table: bool = True,
    label: str = "",
) -> MetricsReport:
    ks = tuple(sorted(set(ks)))
    if not ks or ks[0] < 1:
        raise InvalidSpec("ks must hold at least one positive cutoff")
    params = SearchParams(
        k=max(ks), min_score=min_score, exclude_query_table=exclude_query_table
    )
    prec_sums = {k: 0.0 for k in ks}
    rec_sums = {k: 0.0 for k in ks}
    per_query = []
    timings = []
    for ref, answers in truth.entries:
        results, timing = engine.search_topk_timed(ref, params)
        timings.append(timing)
        row = {
            "query": f"{engine.catalog.table(ref.table_id).name}.{ref.column_name}",
            "returned": [c.to_dict() for c in results],
            "precision": {},
            "recall": {},
        }
        for k in ks:
            p, r = precision_recall_at_k(results, answers, k)
            prec_sums[k] += p
            rec_sums[k] += r
            row["precision"][str(k)] = p
            row["recall"][str(k)] = r
        per_query.append(row)

    n = len(truth.entries)
    summary = TimingSummary()
    if timings:
        summary.mean_sample_s = statistics.fmean(t.sample_s for t in timings)
        summary.mean_embed_s = statistics.fmean(t.embed_s for t in timings)
        summary.mean_lookup_s = statistics.fmean(t.lookup_s for t in timings)
        summary.mean_rank_s = statistics.fmean(t.rank_s for t in timings)
        summary.mean_end_to_end_s = statistics.fmean(t.end_to_end_s for t in timings)
    return MetricsReport(
        label=label,
        ks=list(ks),
        precision={k: (prec_sums[k] / n if n else 0.0) for k in ks},
        recall={k: (rec_sums[k] / n if n else 0.0) for k in ks},
        num_queries=n,
        per_query=per_query,
        timing=summary,
    )


@dataclass
class AblationReport:
    runs: dict[str, MetricsReport]
    deltas: dict[str, dict[str, dict[int, float]]]
    ks: list[int]
    baseline: str = "full"

    def to_dict(self) -> dict:
        return {
            "baseline": self.baseline,
            "ks": self.ks,
            "runs": {label: r.to_dict() for label, r in self.runs.items()},
            "deltas": {
                label: {
                    metric: {str(k): v for k, v in by_k.items()}
                    for metric, by_k in metrics.items()
                }
                for label, metrics in self.deltas.items()
            },
        }

    def save_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    def csv_rows(self) -> list[list[str]]:
        rows = [["size", "k", "precision", "recall", "mean_lookup_s", "mean_end_to_end_s"]]
        for label, report in self.runs.items():
            t = report.timing or TimingSummary()
            for k in report.ks:
                rows.append(
                    [
                        label,
                        str(k),
                        f"{report.precision[k]:.4f}",
                        f"{report.recall[k]:.4f}",
                        f"{t.mean_lookup_s:.6f}",
                        f"{t.mean_end_to_end_s:.6f}",
                    ]
                )
        return rows

    def save_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            csv.writer(fh).writerows(self.csv_rows())


def sampling_ablation(
    catalog: Catalog,
    truth: GroundTruthSet,
    sizes: tuple[int, ...] = (10, 100, 1000),
    ks: tuple[int, ...] = (1, 5, 10),
    sample_seed: int = 42,
    embedder_config: EmbedderConfig | None = None,
    lsh_config: LshConfig | None = None,
    corpus_root: str = "",
) -> AblationReport:
    """Rebuild and evaluate once per sample size against a full-scan baseline."""
    ks = tuple(sorted(set(ks)))
    specs: list[tuple[str, SampleSpec]] = [
        ("full", SampleSpec(strategy="full", size=0, seed=sample_seed))
    ]
    for size in sizes:
        specs.append((str(size), SampleSpec(strategy="reservoir", size=size, seed=sample_seed)))

    runs: dict[str, MetricsReport] = {}
    for label, spec in specs:
        engine = DiscoveryEngine.build(
            catalog,
            sample_spec=spec,
            embedder=embedder_config,
            lsh_config=lsh_config,
            corpus_root=corpus_root,
        )
        runs[label] = evaluate_engine(engine, truth, ks=ks, label=label)

    base = runs["full"]
    deltas: dict[str, dict[str, dict[int, float]]] = {}
    for label, report in runs.items():
        if label == "full":
            continue
        deltas[label] = {
            "precision": {k: report.precision[k] - base.precision[k] for k in ks},
            "recall": {k: report.recall[k] - base.recall[k] for k in ks},
        }
    return AblationReport(runs=runs, deltas=deltas, ks=list(ks))


@dataclass
class TimingReport:
    repeats: int
    num_queries: int
    mean_lookup_s: float
    mean_end_to_end_s: float
    cov_lookup: float
    cov_end_to_end: float
    summary: TimingSummary

    def to_dict(self) -> dict:
        return {
            "repeats": self.repeats,
            "num_queries": self.num_queries,
            "mean_lookup_s": self.mean_lookup_s,
            "mean_end_to_end_s": self.mean_end_to_end_s,
            "cov_lookup": self.cov_lookup,
            "cov_end_to_end": self.cov_end_to_end,
            "decomposition": self.summary.to_dict(),
        }


def _cov(values: list[float]) -> float:
    mean = statistics.fmean(values)
    if mean == 0.0 or len(values) < 2:
        return 0.0
    return statistics.pstdev(values) / mean


def measure_timing(
    engine: DiscoveryEngine,
    queries: list[ColumnRef],
    repeats: int = 3,
    params: SearchParams | None = None,
) -> TimingReport:
    """Mean per-query latency over ``repeats`` timed passes (after one warmup)."""
    if not queries:
        raise InvalidSpec("measure_timing needs at least one query")
    if repeats < 1:
        raise InvalidSpec("repeats must be >= 1")
    params = params or SearchParams()
    for ref in queries:
        engine.search_topk(ref, params)

    pass_lookup: list[float] = []
    pass_e2e: list[float] = []
    acc = {"sample": 0.0, "embed": 0.0, "lookup": 0.0, "rank": 0.0}
    for _ in range(repeats):
        lookup_total = 0.0
        e2e_total = 0.0
        for ref in queries:
            _, t = engine.search_topk_timed(ref, params)
            lookup_total += t.lookup_s
            e2e_total += t.end_to_end_s
            acc["sample"] += t.sample_s
            acc["embed"] += t.embed_s
            acc["lookup"] += t.lookup_s
            acc["rank"] += t.rank_s
        pass_lookup.append(lookup_total / len(queries))
        pass_e2e.append(e2e_total / len(queries))

    n = repeats * len(queries)
    summary = TimingSummary(
        mean_sample_s=acc["sample"] / n,
        mean_embed_s=acc["embed"] / n,
        mean_lookup_s=acc["lookup"] / n,
        mean_rank_s=acc["rank"] / n,
        mean_end_to_end_s=(acc["sample"] + acc["embed"] + acc["lookup"] + acc["rank"]) / n,
    )
    return TimingReport(
        repeats=repeats,
        num_queries=len(queries),
        mean_lookup_s=statistics.fmean(pass_lookup),
        mean_end_to_end_s=statistics.fmean(pass_e2e),
        cov_lookup=_cov(pass_lookup),
        cov_end_to_end=_cov(pass_e2e),
        summary=summary,
    )
