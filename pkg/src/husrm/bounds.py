"""Utility upper bounds and early item pruning.

Three bound families drive the pruning. Per-item seu backs the early
item prune: an item can only appear in a high-utility rule if the
distinct-max utility mass of the sequences containing it reaches
minutil. Per-position ru is the raw suffix utility sum. Per-position rru
tightens ru by counting each distinct later item once, at its maximum
utility within the suffix, and by ignoring later duplicates of the
position's own item; on duplicate-free sequences the two coincide.
Per-item rru sums (per-sequence maxima over the item's occurrences) seed
the first row of a projection table.
"""

from typing import NamedTuple

from .model import Event, Sequence, SequenceDatabase, Threshold, compare_at_least


class PositionRef(NamedTuple):
    """A 1-based position inside one sequence."""

    sid: int
    pos: int


def seu_per_item(db: SequenceDatabase, *, distinct_max: bool = True) -> dict[int, int]:
    """Sequence-estimated utility of every item present in the database.

    With distinct_max (default) the per-sequence term sums each distinct
    item once at its maximum occurrence utility, the tighter form that is
    still an upper bound because rules cannot repeat items. With
    distinct_max=False the term is the plain sum of all event utilities.
    Both forms agree on duplicate-free sequences.
    """
    totals: dict[int, int] = {}
    for seq in db.sequences:
        if distinct_max:
            maxima: dict[int, int] = {}
            for ev in seq.events:
                if ev.utility > maxima.get(ev.item, -1):
                    maxima[ev.item] = ev.utility
            term = sum(maxima.values())
            present = maxima.keys()
        else:
            term = sum(ev.utility for ev in seq.events)
            present = {ev.item for ev in seq.events}
        for item in present:
            totals[item] = totals.get(item, 0) + term
    return totals


def prune_unpromising(
    db: SequenceDatabase, minutil: Threshold, *, distinct_max: bool = True
) -> SequenceDatabase:
    """Single-pass removal of every item whose seu falls below minutil.

    Sequences left empty are dropped; survivors keep their sids. minutil
    is not recomputed afterwards and no fixpoint iteration happens: the
    mining pipeline calls for exactly one pass.
    """
    seu = seu_per_item(db, distinct_max=distinct_max)
    keep = {item for item, value in seu.items() if compare_at_least(value, minutil)}
    out: list[Sequence] = []
    for seq in db.sequences:
        events = tuple(ev for ev in seq.events if ev.item in keep)
        if events:
            out.append(Sequence(seq.sid, events))
    return SequenceDatabase(out, db.items)


def ru_at(db: SequenceDatabase, ref: PositionRef) -> int:
    """Raw remaining utility: suffix utility sum from the position inclusive."""
    events = db.sequence_by_sid(ref.sid).events
    return sum(ev.utility for ev in events[ref.pos - 1 :])


def rru_at(db: SequenceDatabase, ref: PositionRef) -> int:
    """Reduced remaining utility of one position, straight from its definition.

    Own utility, plus one term per distinct later item at its maximum
    utility among occurrences after the position. Later occurrences of
    the position's own item contribute nothing.
    """
    events = db.sequence_by_sid(ref.sid).events
    own = events[ref.pos - 1]
    maxima: dict[int, int] = {}
    for ev in events[ref.pos :]:
        if ev.item == own.item:
            continue
        if ev.utility > maxima.get(ev.item, -1):
            maxima[ev.item] = ev.utility
    return own.utility + sum(maxima.values())


def ru_values(events: tuple[Event, ...]) -> list[int]:
    """Suffix utility sums at every position of one sequence."""
    out = [0] * len(events)
    acc = 0
    for k in range(len(events) - 1, -1, -1):
        acc += events[k].utility
        out[k] = acc
    return out


def rru_values(events: tuple[Event, ...]) -> list[int]:
    """Reduced remaining utility at every position, in one backward pass.

    Maintains the running sum of per-item suffix maxima; the position's
    own item's contribution is subtracted back out.
    """
    n = len(events)
    out = [0] * n
    suffix_max: dict[int, int] = {}
    running = 0
    for k in range(n - 1, -1, -1):
        ev = events[k]
        out[k] = ev.utility + running - suffix_max.get(ev.item, 0)
        prev = suffix_max.get(ev.item, 0)
        if ev.utility > prev:
            suffix_max[ev.item] = ev.utility
            running += ev.utility - prev
    return out


def rru_sum_per_item(db: SequenceDatabase) -> dict[int, int]:
    """Per item: sum over containing sequences of the sequence's maximum rru.

    The per-sequence maximum over the item's occurrences mirrors the
    max-occurrence utility semantics of patterns.
    """
    totals: dict[int, int] = {}
    for seq in db.sequences:
        values = rru_values(seq.events)
        best: dict[int, int] = {}
        for ev, value in zip(seq.events, values):
            if value > best.get(ev.item, -1):
                best[ev.item] = value
        for item, value in best.items():
            totals[item] = totals.get(item, 0) + value
    return totals
