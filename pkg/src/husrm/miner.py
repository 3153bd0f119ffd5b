"""End-to-end mining: depth-first path growth with bound-based pruning
and confidence-guided cut emission.

The pipeline is: optional duplicate removal, optional early item
pruning, one linked-table build, then a depth-first walk over item
prefixes. Every path push emits all the rules that path can support in
one pass: the path's support column is non-increasing, so a binary
search finds the leftmost cut whose antecedent support clears the
confidence bar, and every cut from there to the end shares the path
utility computed once. No per-rule utility recomputation ever happens.

Ablation switches mirror the benchmark variant names: rscn disables the
early item prune, rscp disables the extension-bound gate, rscr swaps the
reduced suffix bound for the raw one.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence as Seq

from .bounds import prune_unpromising
from .dataio import dedup_max_utility
from .model import Rule, SequenceDatabase, Threshold, compare_at_least, confidence_at_least
from .srt import (
    SequenceRecordTable,
    SrtRow,
    init_row,
    scan_extensions,
    scan_extensions_gated,
)
from .ult import UtilityLinkedTable, build_ult

RuleSink = Callable[[Rule], None]
Candidate = tuple[int, int, SrtRow]

VARIANTS: dict[str, dict[str, bool]] = {
    "rsc": {},
    "rscn": {"use_seu_prune": False},
    "rscp": {"use_rrs_prune": False},
    "rscr": {"use_rru": False},
}


@dataclass(slots=True)
class MiningConfig:
    """Thresholds plus ablation and determinism knobs.

    minutil must already be the absolute threshold; when the caller
    starts from a ratio delta it multiplies by the total utility of the
    original database (before any dedup or pruning) first.
    """

    minutil: Threshold
    minconf: Threshold
    use_seu_prune: bool = True
    use_rrs_prune: bool = True
    use_rru: bool = True
    dedup: bool = False
    max_prefix_len: int | None = None
    # The extension gate provably loses nothing at depth 1 either; on by
    # default, switchable for A/B runs.
    rrs_gate_at_top: bool = True
    seu_distinct_max: bool = True
    threads: int = 1

    def __post_init__(self) -> None:
        num, den = self.minconf.numerator, self.minconf.denominator
        if num <= 0 or num > den:
            raise ValueError("minconf must lie in (0, 1]")
        if self.max_prefix_len is not None and self.max_prefix_len < 1:
            raise ValueError("max_prefix_len must be positive")
        if self.threads < 1:
            raise ValueError("threads must be positive")


def variant_config(name: str, minutil: Threshold, minconf: Threshold, **overrides) -> MiningConfig:
    """Config for one named benchmark variant."""
    fields = dict(VARIANTS[name])
    fields.update(overrides)
    return MiningConfig(minutil=minutil, minconf=minconf, **fields)


@dataclass(slots=True)
class MiningStats:
    sequences: int = 0
    distinct_items: int = 0
    items_after_pruning: int = 0
    minutil: Threshold | None = None
    candidates: int = 0
    srt_growth_calls: int = 0
    rrs_prunes: int = 0
    rules: int = 0
    runtime_ms: int = 0

    def add_counters(self, other: "MiningStats") -> None:
        self.candidates += other.candidates
        self.srt_growth_calls += other.srt_growth_calls
        self.rrs_prunes += other.rrs_prunes


def find_cut_start(supports: Seq[int], sup_n: int, minconf: Threshold) -> int:
    """Smallest 1-based k with sup_n / supports[k] >= minconf.

    supports must be non-increasing, which makes the predicate monotone
    in k, so a binary search suffices. Always returns an index within
    1..len(supports) because sup_n / supports[-1] >= minconf whenever
    supports ends at sup_n and minconf <= 1.
    """
    num, den = minconf.numerator, minconf.denominator
    lhs = sup_n * den
    lo, hi = 1, len(supports)
    while lo < hi:
        mid = (lo + hi) // 2
        if lhs >= supports[mid - 1] * num:
            hi = mid
        else:
            lo = mid + 1
    return lo


def rule_produce(srt: SequenceRecordTable, cfg: MiningConfig, sink: RuleSink) -> int:
    """Emit every rule of the current path in one pass; returns the count.

    Gate: the path utility must reach minutil and the last row's support
    must reach minconf against the second-to-last row, the easiest
    antecedent. All emitted rules share the path's utility and support;
    only the antecedent support varies with the cut.
    """
    rows = srt.rows
    n = len(rows)
    if n < 2:
        return 0
    last = rows[-1]
    if not compare_at_least(last.until_utility, cfg.minutil):
        return 0
    if not confidence_at_least(last.support, rows[-2].support, cfg.minconf):
        return 0
    supports = [row.support for row in rows]
    k = find_cut_start(supports, last.support, cfg.minconf)
    items = [row.item for row in rows]
    for j in range(k, n):
        sink(
            Rule(
                tuple(items[:j]),
                tuple(items[j:]),
                last.until_utility,
                last.support,
                supports[j - 1],
            )
        )
    return n - k


def srt_growth(
    ult: UtilityLinkedTable,
    srt: SequenceRecordTable,
    candidate: Candidate,
    cfg: MiningConfig,
    sink: RuleSink,
    stats: MiningStats | None = None,
) -> None:
    """Push one extension row, emit its rules, recurse into gated extensions, pop."""
    _item, _rrs, row = candidate
    srt.push_row(row)
    if stats is not None:
        stats.candidates += 1
        stats.srt_growth_calls += 1
    rule_produce(srt, cfg, sink)
    if cfg.max_prefix_len is None or len(srt) < cfg.max_prefix_len:
        if cfg.use_rrs_prune:
            cands, pruned = scan_extensions_gated(ult, srt, cfg.minutil)
            if stats is not None:
                stats.rrs_prunes += pruned
        else:
            cands = scan_extensions(ult, srt)
        for cand in cands:
            srt_growth(ult, srt, cand, cfg, sink, stats)
    srt.pop_row()


def _mine_from(
    ult: UtilityLinkedTable,
    item: int,
    cfg: MiningConfig,
    sink: RuleSink,
    stats: MiningStats,
) -> None:
    srt = SequenceRecordTable()
    srt.push_row(init_row(ult, item))
    if cfg.max_prefix_len is None or cfg.max_prefix_len > 1:
        if cfg.use_rrs_prune and cfg.rrs_gate_at_top:
            cands, pruned = scan_extensions_gated(ult, srt, cfg.minutil)
            stats.rrs_prunes += pruned
        else:
            cands = scan_extensions(ult, srt)
        for cand in cands:
            srt_growth(ult, srt, cand, cfg, sink, stats)
    srt.pop_row()


def mine(db: SequenceDatabase, cfg: MiningConfig) -> tuple[list[Rule], MiningStats]:
    """Mine every totally ordered rule meeting both thresholds.

    Output order is deterministic: depth-first over header items in
    first-appearance order, cuts left to right. The optional thread pool
    partitions header items across workers, each with a private table
    and rule buffer; buffers concatenate in header order so the output
    is identical to a single-threaded run.
    """
    start = time.perf_counter()
    stats = MiningStats(minutil=cfg.minutil)
    stats.sequences = len(db.sequences)
    stats.distinct_items = len(db.distinct_items())
    work = dedup_max_utility(db) if cfg.dedup else db
    if cfg.use_seu_prune:
        work = prune_unpromising(work, cfg.minutil, distinct_max=cfg.seu_distinct_max)
    stats.items_after_pruning = len(work.distinct_items())
    ult = build_ult(work, use_rru=cfg.use_rru)
    rules: list[Rule] = []
    if cfg.threads > 1 and len(ult.headers) > 1:

        def job(header):
            part: list[Rule] = []
            sub = MiningStats()
            _mine_from(ult, header.item, cfg, part.append, sub)
            return part, sub

        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            for part, sub in pool.map(job, ult.headers):
                rules.extend(part)
                stats.add_counters(sub)
    else:
        for header in ult.headers:
            _mine_from(ult, header.item, cfg, rules.append, stats)
    stats.rules = len(rules)
    stats.runtime_ms = int((time.perf_counter() - start) * 1000)
    return rules, stats
