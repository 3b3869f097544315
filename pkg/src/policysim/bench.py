"""Timing harness: compare random policy pairs and record CSV rows."""
from __future__ import annotations

import csv
import random
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Optional

from .generate import GenConfig, mutate, random_policy
from .ring import sempair_to_terms
from .atomizer import atomize
from .semantics import absolute_semantics
from .similarity import decide, queries
from .xacml import parse_xacml, to_xml, translate


@dataclass(frozen=True)
class BenchConfig:
    rule_counts: tuple[int, ...] = (4, 8, 12, 16, 20)
    param_counts: tuple[int, ...] = (3,)
    pair_counts: tuple[int, ...] = (1,)
    repetitions: int = 10
    values_per_attribute: int = 3
    relation: Optional[str] = None
    seed: int = 0
    workers: int = 0


@dataclass(frozen=True)
class BenchRecord:
    pairId: int
    ruleCount: int
    parameterCount: int
    pairCount: int
    preprocessMillis: float
    proveMillis: float
    totalMillis: float
    relation: str


def compare_timed(doc1: str, doc2: str) -> tuple[float, float, float, str]:
    """(preprocess ms, prove ms, total ms, relation) for one comparison."""
    start = time.perf_counter()
    tr = translate(parse_xacml(doc1), parse_xacml(doc2))
    s1, s2 = (absolute_semantics(term, tr.schema) for term in tr.terms)
    (p1, d1), (p2, d2) = sempair_to_terms(atomize(s1, s2, tr.schema))
    mid = time.perf_counter()
    qs = [queries(p1, p2), queries(d1, d2)]
    rel = decide(all(q.fwd for q in qs), all(q.bwd for q in qs), all(q.disj for q in qs))
    end = time.perf_counter()
    return (mid - start) * 1e3, (end - mid) * 1e3, (end - start) * 1e3, rel.value


def make_pair(cfg: GenConfig, rng: random.Random, relation: Optional[str] = None,
              tries: int = 200) -> tuple[str, str]:
    """A pair of documents; with `relation`, mutations are sampled until it matches."""
    d1 = d2 = None
    for _ in range(tries if relation else 1):
        p1 = random_policy(cfg, rng, name="a")
        p2 = p1
        for _ in range(rng.randint(0 if relation == "Converge" else 1, 2)):
            p2 = mutate(p2, rng, cfg)
        d1, d2 = to_xml(p1), to_xml(p2)
        if relation is None or compare_timed(d1, d2)[3] == relation:
            break
    assert d1 is not None and d2 is not None
    return d1, d2


def _measure(job) -> BenchRecord:
    pair_id, rules, params, pairs, reps, d1, d2 = job
    pre, prove, total = [], [], []
    rel = ""
    for _ in range(reps):
        a, b, c, rel = compare_timed(d1, d2)
        pre.append(a)
        prove.append(b)
        total.append(c)
    return BenchRecord(pair_id, rules, params, pairs, statistics.fmean(pre),
                       statistics.fmean(prove), statistics.fmean(total), rel)


def jobs(cfg: BenchConfig) -> list:
    rng = random.Random(cfg.seed)
    out, pair_id = [], 0
    for rules in cfg.rule_counts:
        for params in cfg.param_counts:
            gen = GenConfig(rule_count=rules, attribute_count=params,
                            values_per_attribute=cfg.values_per_attribute, seed=cfg.seed)
            for pairs in cfg.pair_counts:
                for _ in range(pairs):
                    d1, d2 = make_pair(gen, rng, cfg.relation)
                    out.append((pair_id, rules, params, pairs, cfg.repetitions, d1, d2))
                    pair_id += 1
    return out


def run_bench(cfg: BenchConfig) -> list[BenchRecord]:
    work = jobs(cfg)
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            records = list(pool.map(_measure, work))
    else:
        records = [_measure(j) for j in work]
    return sorted(records, key=lambda r: (r.ruleCount, r.parameterCount, r.pairId))


def write_csv(records: Iterable[BenchRecord], path_or_file) -> None:
    names = [f.name for f in fields(BenchRecord)]

    def dump(fh):
        w = csv.DictWriter(fh, fieldnames=names)
        w.writeheader()
        for r in records:
            w.writerow(asdict(r))

    if hasattr(path_or_file, "write"):
        dump(path_or_file)
    else:
        with open(path_or_file, "w", newline="", encoding="utf-8") as fh:
            dump(fh)


def summarize(records: Iterable[BenchRecord]) -> dict[tuple[int, int, int], dict]:
    """Per (ruleCount, parameterCount, pairCount) cell: mean times and total."""
    cells: dict = {}
    for r in records:
        cells.setdefault((r.ruleCount, r.parameterCount, r.pairCount), []).append(r)
    out = {}
    for key, rs in sorted(cells.items()):
        out[key] = {
            "pairs": len(rs),
            "meanTotalMillis": statistics.fmean(r.totalMillis for r in rs),
            "meanPreprocessMillis": statistics.fmean(r.preprocessMillis for r in rs),
            "meanProveMillis": statistics.fmean(r.proveMillis for r in rs),
            "sumTotalMillis": sum(r.totalMillis for r in rs),
        }
    return out


def linear_fit(xs: list[float], ys: list[float]) -> tuple[float, float, float]:
    """(slope, intercept, R²) of the least-squares line."""
    slope, intercept = statistics.linear_regression(xs, ys)
    r = statistics.correlation(xs, ys)
    return slope, intercept, r * r
