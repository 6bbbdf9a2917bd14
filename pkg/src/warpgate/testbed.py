"""Synthetic corpus generator with planted joinable column pairs.

Every planted pair shares a pair-specific stem: both columns draw values
shaped ``stem-token`` from a common domain, one side keeps them clean and
the other gets a containment-limited subset plus surface noise (case
flips, punctuation, affixes). Unrelated columns get their own stems, so
planted pairs sit far above the background similarity floor.

All randomness flows from a single seeded ``random.Random``; the same
spec always reproduces byte-identical corpus and truth files.
"""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InvalidSpec

_CONSONANTS = "bcdfghjklmnpqrstvwz"
_VOWELS = "aeiou"
_PREFIXES = ("the ", "old ", "new ")
_SUFFIXES = (" inc", " co", " ltd")
_PUNCT = ".!:;"


@dataclass(frozen=True)
class NoiseProfile:
    case_flip: float = 0.15
    punctuation: float = 0.10
    affix: float = 0.10

    def __post_init__(self):
        for name in ("case_flip", "punctuation", "affix"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise InvalidSpec(f"{name} must be in [0, 1], got {p}")

    def to_dict(self) -> dict:
        return {
            "case_flip": self.case_flip,
            "punctuation": self.punctuation,
            "affix": self.affix,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NoiseProfile":
        return cls(**d)


@dataclass(frozen=True)
class TestbedSpec:
    num_tables: int = 10
    columns_per_table: int = 5
    rows_per_table: int = 1000
    planted_pairs: int = 20
    noise: NoiseProfile = field(default_factory=NoiseProfile)
    seed: int = 7
    containment_min: float = 0.5
    containment_max: float = 1.0

    def __post_init__(self):
        if self.num_tables < 1:
            raise InvalidSpec("num_tables must be >= 1")
        if self.columns_per_table < 1:
            raise InvalidSpec("columns_per_table must be >= 1")
        if self.rows_per_table < 1:
            raise InvalidSpec("rows_per_table must be >= 1")
        if self.planted_pairs < 0:
            raise InvalidSpec("planted_pairs must be >= 0")
        total = self.num_tables * self.columns_per_table
        if self.planted_pairs * 2 > total:
            raise InvalidSpec(
                f"{self.planted_pairs} pairs need {self.planted_pairs * 2} "
                f"columns but the corpus only has {total}"
            )
        if self.planted_pairs > 0 and self.num_tables < 2:
            raise InvalidSpec("planted pairs are cross-table; need >= 2 tables")
        if not 0.0 <= self.containment_min <= self.containment_max <= 1.0:
            raise InvalidSpec(
                "containment bounds must satisfy 0 <= min <= max <= 1"
            )

    def to_dict(self) -> dict:
        return {
            "num_tables": self.num_tables,
            "columns_per_table": self.columns_per_table,
            "rows_per_table": self.rows_per_table,
            "planted_pairs": self.planted_pairs,
            "noise": self.noise.to_dict(),
            "seed": self.seed,
            "containment_min": self.containment_min,
            "containment_max": self.containment_max,
        }


@dataclass
class TestbedResult:
    corpus_dir: Path
    truth_path: Path
    tables: list[str]
    pairs: list[tuple[tuple[str, str], tuple[str, str]]]


def _word(rng: random.Random, lo: int, hi: int, taken: set[str] | None = None) -> str:
    while True:
        n = rng.randint(lo, hi)
        w = "".join(
            rng.choice(_CONSONANTS) if i % 2 == 0 else rng.choice(_VOWELS)
            for i in range(n)
        )
        if taken is None:
            return w
        if w not in taken:
            taken.add(w)
            return w


def _domain(rng: random.Random, stem: str, size: int) -> list[str]:
    values: list[str] = []
    seen: set[str] = set()
    while len(values) < size:
        v = f"{stem}-{_word(rng, 3, 6)}"
        if v not in seen:
            seen.add(v)
            values.append(v)
    return values


def _apply_noise(rng: random.Random, value: str, noise: NoiseProfile) -> str:
    v = value
    if noise.case_flip > 0 and rng.random() < noise.case_flip:
        v = rng.choice((str.upper, str.title, str.swapcase))(v)
    if noise.punctuation > 0 and rng.random() < noise.punctuation:
        v = v + rng.choice(_PUNCT)
    if noise.affix > 0 and rng.random() < noise.affix:
        if rng.random() < 0.5:
            v = rng.choice(_PREFIXES) + v
        else:
            v = v + rng.choice(_SUFFIXES)
    return v


def generate_testbed(spec: TestbedSpec, out_dir) -> TestbedResult:
    out = Path(out_dir)
    corpus_dir = out / "corpus"
    corpus_dir.mkdir(parents=True, exist_ok=True)
    truth_path = out / "truth.csv"
    rng = random.Random(spec.seed)
    taken: set[str] = set()

    slots = [
        (t, c)
        for t in range(spec.num_tables)
        for c in range(spec.columns_per_table)
    ]
    shuffled = list(slots)
    rng.shuffle(shuffled)
    pair_slots: list[tuple[tuple[int, int], tuple[int, int]]] = []
    while len(pair_slots) < spec.planted_pairs and shuffled:
        a = shuffled.pop(0)
        b_idx = next(
            (i for i, s in enumerate(shuffled) if s[0] != a[0]), None
        )
        if b_idx is None:
            break
        b = shuffled.pop(b_idx)
        pair_slots.append((min(a, b), max(a, b)))
    if len(pair_slots) < spec.planted_pairs:
        raise InvalidSpec(
            "could not place all planted pairs across distinct tables"
        )

    # pair_id -> (stem, containment); slot -> (pair_id, is_primary)
    pair_params: list[tuple[str, float]] = []
    slot_role: dict[tuple[int, int], tuple[int, bool]] = {}
    for pid, (a, b) in enumerate(pair_slots):
        stem = _word(rng, 5, 8, taken)
        containment = rng.uniform(spec.containment_min, spec.containment_max)
        pair_params.append((stem, containment))
        slot_role[a] = (pid, True)
        slot_role[b] = (pid, False)

    domain_size = max(10, spec.rows_per_table // 2)
    pair_domains: dict[int, list[str]] = {}
    table_names = [f"table_{t:03d}" for t in range(spec.num_tables)]
    column_names: dict[tuple[int, int], str] = {}
    pairs_out: list[tuple[tuple[str, str], tuple[str, str]]] = []

    for t in range(spec.num_tables):
        columns: list[list[str]] = []
        names: list[str] = []
        for c in range(spec.columns_per_table):
            name = _word(rng, 4, 7, taken)
            names.append(name)
            column_names[(t, c)] = name
            role = slot_role.get((t, c))
            if role is None:
                stem = _word(rng, 5, 8, taken)
                domain = _domain(rng, stem, domain_size)
            else:
                pid, is_primary = role
                stem, containment = pair_params[pid]
                if is_primary:
                    domain = _domain(rng, stem, domain_size)
                    pair_domains[pid] = domain
                else:
                    base = list(pair_domains[pid])
                    rng.shuffle(base)
                    shared = base[: math.ceil(containment * domain_size)]
                    fresh = _domain(rng, stem, domain_size - len(shared))
                    domain = [
                        _apply_noise(rng, v, spec.noise) for v in shared + fresh
                    ]
            columns.append(
                [domain[rng.randrange(len(domain))] for _ in range(spec.rows_per_table)]
            )
        path = corpus_dir / f"{table_names[t]}.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(names)
            for i in range(spec.rows_per_table):
                writer.writerow([columns[c][i] for c in range(spec.columns_per_table)])

    with open(truth_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["query_table", "query_column", "answer_table", "answer_column"]
        )
        for (ta, ca), (tb, cb) in pair_slots:
            qa = (table_names[ta], column_names[(ta, ca)])
            qb = (table_names[tb], column_names[(tb, cb)])
            pairs_out.append((qa, qb))
            writer.writerow([qa[0], qa[1], qb[0], qb[1]])
            writer.writerow([qb[0], qb[1], qa[0], qa[1]])

    return TestbedResult(
        corpus_dir=corpus_dir,
        truth_path=truth_path,
        tables=table_names,
        pairs=pairs_out,
    )
