"""Core domain types shared by every stage of the mining pipeline.

A sequence database is an ordered list of sequences; each sequence is an
ordered, non-empty list of (item, utility) events. Items are interned to
dense integer ids in first-appearance order, so repeated loads of the
same input always assign the same ids. Thresholds are exact non-negative
rationals and every threshold decision is made by integer
cross-multiplication; floats never enter a mining decision.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

U64_MAX = 2**64 - 1


class ItemTable:
    """Interning table mapping item tokens to dense ids and back.

    Interning is a bijection: distinct tokens get distinct ids, ids are
    assigned in first-appearance order, and token -> id -> token is the
    identity.
    """

    __slots__ = ("_tokens", "_by_token")

    def __init__(self, tokens: Iterable[str] = ()) -> None:
        self._tokens: list[str] = []
        self._by_token: dict[str, int] = {}
        for token in tokens:
            self.intern(token)

    def intern(self, token: str) -> int:
        iid = self._by_token.get(token)
        if iid is None:
            if not token:
                raise ValueError("empty item label")
            iid = len(self._tokens)
            self._by_token[token] = iid
            self._tokens.append(token)
        return iid

    def id_of(self, token: str) -> int:
        return self._by_token[token]

    def token_of(self, item: int) -> str:
        return self._tokens[item]

    def tokens(self) -> tuple[str, ...]:
        return tuple(self._tokens)

    def __len__(self) -> int:
        return len(self._tokens)

    def __contains__(self, token: object) -> bool:
        return token in self._by_token

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ItemTable) and self._tokens == other._tokens

    def __repr__(self) -> str:
        return f"ItemTable({len(self._tokens)} items)"


@dataclass(frozen=True, slots=True)
class Event:
    """One item occurrence with its non-negative utility."""

    item: int
    utility: int


@dataclass(frozen=True, slots=True)
class Sequence:
    """One database row: an ordered, non-empty run of events. sid is 1-based."""

    sid: int
    events: tuple[Event, ...]

    def __len__(self) -> int:
        return len(self.events)


class SequenceDatabase:
    """Immutable ordered collection of sequences plus the item interner.

    total_utility is the sum of every event utility. sids are contiguous
    1..n at load time; transformation passes (duplicate removal, item
    pruning) keep the surviving sequences' original sids.
    """

    __slots__ = ("sequences", "total_utility", "items", "_by_sid")

    def __init__(self, sequences: Iterable[Sequence], items: ItemTable) -> None:
        self.sequences: tuple[Sequence, ...] = tuple(sequences)
        self.items = items
        self.total_utility = sum(
            ev.utility for seq in self.sequences for ev in seq.events
        )
        self._by_sid = {seq.sid: i for i, seq in enumerate(self.sequences)}
        if len(self._by_sid) != len(self.sequences):
            raise ValueError("duplicate sids")

    def sequence_by_sid(self, sid: int) -> Sequence:
        return self.sequences[self._by_sid[sid]]

    def distinct_items(self) -> list[int]:
        """Item ids actually present, in first-appearance order."""
        seen: set[int] = set()
        out: list[int] = []
        for seq in self.sequences:
            for ev in seq.events:
                if ev.item not in seen:
                    seen.add(ev.item)
                    out.append(ev.item)
        return out

    def __len__(self) -> int:
        return len(self.sequences)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SequenceDatabase)
            and self.sequences == other.sequences
            and self.items == other.items
        )

    def __repr__(self) -> str:
        return (
            f"SequenceDatabase({len(self.sequences)} sequences,"
            f" total_utility={self.total_utility})"
        )


def build_database(
    rows: Iterable[Iterable[tuple[str, int]]], items: ItemTable | None = None
) -> SequenceDatabase:
    """Build a database from rows of (token, utility) pairs.

    Empty rows are skipped, mirroring how parsers skip blank lines.
    Tokens must be non-empty and free of whitespace so the native writer
    can round-trip them.
    """
    table = items if items is not None else ItemTable()
    seqs: list[Sequence] = []
    for row in rows:
        events: list[Event] = []
        for token, utility in row:
            if not token or token.split() != [token]:
                raise ValueError(f"bad item label: {token!r}")
            utility = int(utility)
            if utility < 0 or utility > U64_MAX:
                raise ValueError(f"utility out of range: {utility}")
            events.append(Event(table.intern(token), utility))
        if events:
            seqs.append(Sequence(len(seqs) + 1, tuple(events)))
    return SequenceDatabase(seqs, table)


_DECIMAL = re.compile(r"^(\d+)?(?:\.(\d*))?$")


@dataclass(frozen=True, slots=True)
class Threshold:
    """Exact non-negative rational used for minutil / minconf decisions.

    Parsed from a decimal literal the denominator is a power of ten; the
    fraction is never reduced and never rounded.
    """

    numerator: int
    denominator: int

    def __post_init__(self) -> None:
        if self.numerator < 0:
            raise ValueError("negative threshold")
        if self.denominator <= 0:
            raise ValueError("threshold denominator must be positive")

    @classmethod
    def from_string(cls, text: str) -> "Threshold":
        m = _DECIMAL.match(text.strip())
        if not m or (m.group(1) is None and not m.group(2)):
            raise ValueError(f"not a decimal threshold: {text!r}")
        whole = m.group(1) or "0"
        frac = m.group(2) or ""
        return cls(int(whole + frac), 10 ** len(frac))

    def times(self, factor: int) -> "Threshold":
        """Scale by a non-negative integer (e.g. delta times total utility)."""
        if factor < 0:
            raise ValueError("negative scale factor")
        return Threshold(self.numerator * factor, self.denominator)

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


def compare_at_least(value: int, threshold: Threshold) -> bool:
    """True iff value >= threshold, decided exactly by cross-multiplication."""
    return value * threshold.denominator >= threshold.numerator


def confidence_at_least(sup: int, ant_sup: int, minconf: Threshold) -> bool:
    """True iff sup / ant_sup >= minconf, decided exactly."""
    return sup * minconf.denominator >= ant_sup * minconf.numerator


@dataclass(frozen=True, slots=True)
class Rule:
    """A totally ordered sequential rule.

    Antecedent and consequent items each keep strict database order; no
    item repeats across the two sides. The utility is the rule sequence's
    utility over the whole database and the confidence is
    support / antecedent_support, exact.
    """

    antecedent: tuple[int, ...]
    consequent: tuple[int, ...]
    utility: int
    support: int
    antecedent_support: int

    def __post_init__(self) -> None:
        if not self.antecedent or not self.consequent:
            raise ValueError("rule sides must be non-empty")
        combined = self.antecedent + self.consequent
        if len(set(combined)) != len(combined):
            raise ValueError("rule items must be pairwise distinct")
        if not 1 <= self.support <= self.antecedent_support:
            raise ValueError("need 1 <= support <= antecedent_support")
        if self.utility < 0:
            raise ValueError("negative utility")

    @property
    def confidence(self) -> Fraction:
        return Fraction(self.support, self.antecedent_support)

    def key(self) -> tuple:
        """Canonical identity for set comparisons and diffs."""
        return (
            self.antecedent,
            self.consequent,
            self.utility,
            self.support,
            self.antecedent_support,
        )
