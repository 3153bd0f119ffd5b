"""Reading and writing sequence databases, rules, and run statistics.

Two input encodings are supported. The native encoding puts one sequence
per line as whitespace-separated ``item:utility`` tokens, with ``#``
comment lines. The SPMF-style encoding puts one sequence per line as
``item[utility]`` tokens separated by ``-1`` markers and terminated by
``-2``, with an optional ``SUtility:<n>`` trailer that is ignored and
recomputed. Itemsets holding more than one item are rejected: events
never happen simultaneously in this model.

Rule and statistics line formats are byte-exact contracts; golden tests
pin them.
"""

import io
import re
from pathlib import Path
from typing import IO, Iterable, TextIO

from .model import (
    U64_MAX,
    Event,
    ItemTable,
    Rule,
    Sequence,
    SequenceDatabase,
)


class ParseError(ValueError):
    """Input rejection carrying the 1-based line number of the bad line."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


def _lines(stream: str | IO[str]) -> Iterable[str]:
    if isinstance(stream, str):
        return io.StringIO(stream)
    return stream


def parse_native(stream: str | IO[str]) -> SequenceDatabase:
    """Parse the native ``item:utility`` line format.

    Blank and ``#`` comment lines are skipped, not stored; sids follow
    the order of the remaining lines.
    """
    table = ItemTable()
    seqs: list[Sequence] = []
    for lineno, raw in enumerate(_lines(stream), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        events: list[Event] = []
        for tok in line.split():
            label, sep, utext = tok.rpartition(":")
            if not sep:
                raise ParseError(lineno, f"malformed token {tok!r}: expected item:utility")
            if not label:
                raise ParseError(lineno, f"empty item label in token {tok!r}")
            if not (utext.isascii() and utext.isdigit()):
                if utext.startswith("-") and utext[1:].isdigit():
                    raise ParseError(lineno, f"negative utility in token {tok!r}")
                raise ParseError(lineno, f"non-integer utility in token {tok!r}")
            utility = int(utext)
            if utility > U64_MAX:
                raise ParseError(lineno, f"utility out of 64-bit range in token {tok!r}")
            events.append(Event(table.intern(label), utility))
        seqs.append(Sequence(len(seqs) + 1, tuple(events)))
    return SequenceDatabase(seqs, table)


_SPMF_EVENT = re.compile(r"^(.+)\[(\d+)\]$")
_SPMF_TRAILER = re.compile(r"^SUtility:\d+$")


def parse_spmf(stream: str | IO[str]) -> SequenceDatabase:
    """Parse the SPMF-style ``item[utility] -1 ... -2`` line format.

    Only singleton itemsets are accepted. The SUtility trailer, when
    present, is ignored; total utility is always recomputed from the
    events themselves.
    """
    table = ItemTable()
    seqs: list[Sequence] = []
    for lineno, raw in enumerate(_lines(stream), start=1):
        line = raw.strip()
        if not line or line[0] in "#%@":
            continue
        events: list[Event] = []
        itemset: list[Event] = []
        terminated = False
        for tok in line.split():
            if terminated:
                if _SPMF_TRAILER.match(tok):
                    continue
                raise ParseError(lineno, f"unexpected content after -2: {tok!r}")
            if tok == "-1":
                if len(itemset) > 1:
                    raise ParseError(lineno, "simultaneous events unsupported")
                events.extend(itemset)
                itemset = []
            elif tok == "-2":
                if itemset:
                    raise ParseError(lineno, "itemset not closed by -1 before -2")
                terminated = True
            else:
                m = _SPMF_EVENT.match(tok)
                if not m:
                    raise ParseError(
                        lineno, f"malformed token {tok!r}: expected item[utility]"
                    )
                utility = int(m.group(2))
                if utility > U64_MAX:
                    raise ParseError(
                        lineno, f"utility out of 64-bit range in token {tok!r}"
                    )
                itemset.append(Event(table.intern(m.group(1)), utility))
        if not terminated:
            raise ParseError(lineno, "missing -2 terminator")
        if events:
            seqs.append(Sequence(len(seqs) + 1, tuple(events)))
    return SequenceDatabase(seqs, table)


def load_database(path: str | Path, fmt: str = "auto") -> SequenceDatabase:
    """Load a database file, picking the parser by extension when fmt is auto.

    ``.usdb``/``.native`` parse as native; ``.spmf``/``.txt`` parse as
    SPMF. Anything else needs an explicit format.
    """
    path = Path(path)
    if fmt == "auto":
        suffix = path.suffix.lower()
        if suffix in (".usdb", ".native"):
            fmt = "native"
        elif suffix in (".spmf", ".txt"):
            fmt = "spmf"
        else:
            raise ValueError(
                f"cannot auto-detect format of {path.name!r}; pass an explicit format"
            )
    if fmt not in ("native", "spmf"):
        raise ValueError(f"unknown format {fmt!r}")
    with open(path, "r", encoding="utf-8") as handle:
        return parse_native(handle) if fmt == "native" else parse_spmf(handle)


def write_native(db: SequenceDatabase, stream: TextIO) -> None:
    """Write the native format; parse_native(write_native(db)) == db."""
    items = db.items
    for seq in db.sequences:
        stream.write(
            " ".join(f"{items.token_of(ev.item)}:{ev.utility}" for ev in seq.events)
        )
        stream.write("\n")


def dedup_max_utility(db: SequenceDatabase) -> SequenceDatabase:
    """Keep, per sequence and per item, the single highest-utility occurrence.

    Ties keep the earliest occurrence. Surviving events keep their
    original relative order, sids are preserved, and total utility is
    recomputed. Idempotent.
    """
    out: list[Sequence] = []
    for seq in db.sequences:
        best: dict[int, int] = {}
        for k, ev in enumerate(seq.events):
            cur = best.get(ev.item)
            if cur is None or ev.utility > seq.events[cur].utility:
                best[ev.item] = k
        keep = set(best.values())
        out.append(
            Sequence(seq.sid, tuple(ev for k, ev in enumerate(seq.events) if k in keep))
        )
    return SequenceDatabase(out, db.items)


def _conf_4dp(sup: int, ant_sup: int) -> str:
    # round half up at 4 decimal places, in exact integer arithmetic
    scaled = (20000 * sup + ant_sup) // (2 * ant_sup)
    return f"{scaled // 10000}.{scaled % 10000:04d}"


def format_rule(rule: Rule, items: ItemTable) -> str:
    ant = ",".join(items.token_of(i) for i in rule.antecedent)
    cons = ",".join(items.token_of(i) for i in rule.consequent)
    return (
        f"{ant} ==> {cons} #UTIL: {rule.utility} #SUP: {rule.support}"
        f" #CONF: {_conf_4dp(rule.support, rule.antecedent_support)}"
    )


def write_rules(
    rules: Iterable[Rule], items: ItemTable, stream: TextIO, *, sort: bool = False
) -> None:
    """Emit one rule per line, in mining order unless sort is requested.

    Sorted order is utility descending, then antecedent and consequent
    token tuples lexicographically, for human consumption.
    """
    rows = list(rules)
    if sort:
        rows.sort(
            key=lambda r: (
                -r.utility,
                tuple(items.token_of(i) for i in r.antecedent),
                tuple(items.token_of(i) for i in r.consequent),
            )
        )
    for rule in rows:
        stream.write(format_rule(rule, items))
        stream.write("\n")


def write_stats(stats, stream: TextIO) -> None:
    """Emit run statistics as key=value lines.

    Two runs over the same input and flags differ only in runtime_ms.
    """
    minutil = stats.minutil
    stream.write(f"sequences={stats.sequences}\n")
    stream.write(f"distinct_items={stats.distinct_items}\n")
    stream.write(f"items_after_pruning={stats.items_after_pruning}\n")
    stream.write(f"minutil_num={minutil.numerator if minutil else 0}\n")
    stream.write(f"minutil_den={minutil.denominator if minutil else 1}\n")
    stream.write(f"candidates={stats.candidates}\n")
    stream.write(f"rules={stats.rules}\n")
    stream.write(f"srtgrowth_calls={stats.srt_growth_calls}\n")
    stream.write(f"rrs_prunes={stats.rrs_prunes}\n")
    stream.write(f"runtime_ms={stats.runtime_ms}\n")
