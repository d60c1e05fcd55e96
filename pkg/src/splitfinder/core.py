"""Instance data model and exact version-space arithmetic.

An instance is a finite binary outcome matrix: every hypothesis answers 0 or
1 on every test, and no two hypotheses share an outcome row (identifiability).
Outcomes are stored twice — per-test column bitsets over hypotheses and
per-hypothesis row bitsets over tests — so split counting and restriction are
single word-parallel set operations.  Every probability here is an exact
`fractions.Fraction`; floats only appear downstream in bound formulas.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Mapping


class InstanceError(ValueError):
    """Base class for instance validation failures."""


class EmptyInstance(InstanceError):
    pass


class DuplicateId(InstanceError):
    pass


class RowLengthMismatch(InstanceError):
    pass


class DuplicateOutcomeRow(InstanceError):
    pass


class InvalidOutcome(InstanceError):
    pass


class InvalidMeta(InstanceError):
    pass


class EmptyVersionSpace(ValueError):
    """Raised when an operation requires a nonempty version space."""


@dataclass(frozen=True)
class TestRecord:
    id: str
    meta: Mapping[str, Any] | None = None


@dataclass(frozen=True)
class HypothesisRecord:
    id: str
    outcomes: str  # '0'/'1' characters, one per test, in instance test order
    meta: Mapping[str, Any] | None = None


@dataclass(frozen=True)
class Instance:
    """Validated, immutable hypothesis/test outcome matrix.

    Safe to share across threads: every field is effectively constant after
    construction and all operations on it are pure functions.
    """

    name: str
    family: str
    params: Mapping[str, Any]
    tests: tuple[TestRecord, ...]
    hypotheses: tuple[HypothesisRecord, ...]
    columns: tuple[int, ...] = field(repr=False)  # per test, bitset over hypotheses
    rows: tuple[int, ...] = field(repr=False)  # per hypothesis, bitset over tests

    @property
    def n(self) -> int:
        return len(self.hypotheses)

    @property
    def m_tests(self) -> int:
        return len(self.tests)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def test_index(self) -> dict[str, int]:
        return {t.id: i for i, t in enumerate(self.tests)}

    @cached_property
    def hypothesis_index(self) -> dict[str, int]:
        return {h.id: i for i, h in enumerate(self.hypotheses)}

    def outcome(self, hypothesis: int, test: int) -> int:
        return (self.rows[hypothesis] >> test) & 1


@dataclass(frozen=True)
class VersionSpace:
    """A subset of hypothesis indices, encoded as a bitset."""

    instance: Instance
    members: int

    @property
    def size(self) -> int:
        return self.members.bit_count()

    def member_indices(self) -> tuple[int, ...]:
        return _bits(self.members)

    def member_ids(self) -> tuple[str, ...]:
        hyps = self.instance.hypotheses
        return tuple(hyps[i].id for i in self.member_indices())


@dataclass(frozen=True)
class SplitValue:
    """Fraction of the version space answering 1, and the induced split constant."""

    p_one: Fraction
    split: Fraction

    @classmethod
    def from_p_one(cls, p_one: Fraction) -> SplitValue:
        return cls(p_one, min(p_one, 1 - p_one))


@dataclass(frozen=True)
class DeltaSet:
    """Hypotheses answering 0 on `from_test` and 1 on `to_test`."""

    from_test: int
    to_test: int
    members: int

    @property
    def size(self) -> int:
        return self.members.bit_count()

    def member_indices(self) -> tuple[int, ...]:
        return _bits(self.members)


def _bits(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def validate_instance(raw: Mapping[str, Any]) -> Instance:
    """Check an instance document and build the indexed Instance.

    Raises EmptyInstance, DuplicateId, RowLengthMismatch, InvalidOutcome,
    DuplicateOutcomeRow, or InvalidMeta; anything that passes satisfies all
    instance invariants.
    """
    tests_raw = raw.get("tests")
    hyps_raw = raw.get("hypotheses")
    if not tests_raw:
        raise EmptyInstance("instance has no tests")
    if not hyps_raw:
        raise EmptyInstance("instance has no hypotheses")

    tests = []
    seen_test_ids: set[str] = set()
    for entry in tests_raw:
        tid = str(entry["id"])
        if tid in seen_test_ids:
            raise DuplicateId(f"duplicate test id {tid!r}")
        seen_test_ids.add(tid)
        meta = entry.get("meta")
        tests.append(TestRecord(tid, dict(meta) if meta else None))

    m_tests = len(tests)
    hypotheses = []
    seen_hyp_ids: set[str] = set()
    seen_rows: dict[str, str] = {}
    for entry in hyps_raw:
        hid = str(entry["id"])
        if hid in seen_hyp_ids:
            raise DuplicateId(f"duplicate hypothesis id {hid!r}")
        seen_hyp_ids.add(hid)
        outcomes = entry["outcomes"]
        if not isinstance(outcomes, str):
            raise InvalidOutcome(f"hypothesis {hid!r}: outcomes must be a string")
        if len(outcomes) != m_tests:
            raise RowLengthMismatch(
                f"hypothesis {hid!r}: row length {len(outcomes)} != {m_tests} tests"
            )
        if outcomes.strip("01"):
            raise InvalidOutcome(f"hypothesis {hid!r}: outcomes must be '0'/'1'")
        if outcomes in seen_rows:
            raise DuplicateOutcomeRow(
                f"hypotheses {seen_rows[outcomes]!r} and {hid!r} share an outcome row"
            )
        seen_rows[outcomes] = hid
        meta = entry.get("meta")
        hypotheses.append(HypothesisRecord(hid, outcomes, dict(meta) if meta else None))

    _check_meta_dimensions(tests, hypotheses)

    rows = tuple(int(h.outcomes[::-1], 2) for h in hypotheses)
    columns = []
    for x in range(m_tests):
        col = 0
        for i, row in enumerate(rows):
            col |= ((row >> x) & 1) << i
        columns.append(col)

    return Instance(
        name=str(raw.get("name", "")),
        family=str(raw.get("family", "")),
        params=dict(raw.get("params") or {}),
        tests=tuple(tests),
        hypotheses=tuple(hypotheses),
        columns=tuple(columns),
        rows=rows,
    )


def _check_meta_dimensions(tests, hypotheses) -> None:
    dim = None
    for rec in (*tests, *hypotheses):
        coords = (rec.meta or {}).get("coords")
        if coords is None:
            continue
        if dim is None:
            dim = len(coords)
        elif len(coords) != dim:
            raise InvalidMeta(
                f"record {rec.id!r}: coords dimension {len(coords)} != {dim}"
            )


def full_space(instance: Instance) -> VersionSpace:
    return VersionSpace(instance, instance.full_mask)


def split_probability(space: VersionSpace, x: int) -> SplitValue:
    """Exact fraction of the version space answering 1 on test x."""
    if space.members == 0:
        raise EmptyVersionSpace("split_probability on empty version space")
    size = space.size
    ones = (space.members & space.instance.columns[x]).bit_count()
    return SplitValue.from_p_one(Fraction(ones, size))


def best_split_test(space: VersionSpace) -> tuple[int, SplitValue]:
    """Test whose positive fraction is closest to 1/2; ties go to the lowest index."""
    if space.members == 0:
        raise EmptyVersionSpace("best_split_test on empty version space")
    members = space.members
    size = space.size
    best_x = 0
    best_count = -1
    for x, col in enumerate(space.instance.columns):
        ones = (members & col).bit_count()
        smaller = min(ones, size - ones)
        if smaller > best_count:
            best_count = smaller
            best_x = x
            if 2 * smaller == size:
                break  # perfect split; no later test can do better
    return best_x, split_probability(space, best_x)


def restrict(space: VersionSpace, x: int, y: int) -> VersionSpace:
    """Keep the hypotheses answering y on test x.  May be empty; caller checks."""
    col = space.instance.columns[x]
    if y:
        members = space.members & col
    else:
        members = space.members & ~col & space.instance.full_mask
    return VersionSpace(space.instance, members)


def delta_set(instance: Instance, x: int, x_prime: int) -> DeltaSet:
    """Hypotheses answering 0 on x and 1 on x_prime."""
    members = ~instance.columns[x] & instance.columns[x_prime] & instance.full_mask
    return DeltaSet(x, x_prime, members)
