"""Compare code-side and policy-side data practice sets.

The relation between the two sets falls into exactly one of five patterns
(intersection, separation, and three kinds of overlap). Findings are
graded: a data type present on only one side is a strong inconsistency; a
type present on both sides with different operation sets is a weak one,
reported with the missing operations per direction so the report is
actionable. Comparison is pure set algebra over (type, operation) tuples;
no string similarity happens here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .taint import DataPractice

INTERSECTION = "Intersection"
SEPARATION = "Separation"
OVERLAP_UNINFORMED = "OverlapUninformed"
OVERLAP_REDUNDANT = "OverlapRedundant"
OVERLAP_CONSISTENT = "OverlapConsistent"

PATTERNS = (INTERSECTION, SEPARATION, OVERLAP_UNINFORMED,
            OVERLAP_REDUNDANT, OVERLAP_CONSISTENT)

STRENGTH_NONE = "-"
STRENGTH_STRONG = "Strong"
STRENGTH_WEAK = "Weak"
STRENGTH_BOTH = "Strong&Weak"


@dataclass
class ConsistencyResult:
    pattern: str
    # data types found in exactly one side
    strong_uninformed: set[str] = field(default_factory=set)   # code only
    strong_redundant: set[str] = field(default_factory=set)    # policy only
    # (type, operations missing from the other side), for shared types
    weak_uninformed: dict[str, frozenset] = field(default_factory=dict)
    weak_redundant: dict[str, frozenset] = field(default_factory=dict)
    code_set: frozenset = frozenset()
    policy_set: frozenset = frozenset()

    @property
    def strength(self) -> str:
        strong = bool(self.strong_uninformed or self.strong_redundant)
        weak = bool(self.weak_uninformed or self.weak_redundant)
        if strong and weak:
            return STRENGTH_BOTH
        if strong:
            return STRENGTH_STRONG
        if weak:
            return STRENGTH_WEAK
        return STRENGTH_NONE

    @property
    def consistent(self) -> bool:
        return self.pattern == OVERLAP_CONSISTENT

    def finding_count(self) -> int:
        return (len(self.strong_uninformed) + len(self.strong_redundant)
                + len(self.weak_uninformed) + len(self.weak_redundant))

    def to_dict(self) -> dict:
        return {
            "pattern": self.pattern,
            "strength": self.strength,
            "strong_uninformed": sorted(self.strong_uninformed),
            "strong_redundant": sorted(self.strong_redundant),
            "weak_uninformed": [
                [t, sorted(ops)] for t, ops
                in sorted(self.weak_uninformed.items())],
            "weak_redundant": [
                [t, sorted(ops)] for t, ops
                in sorted(self.weak_redundant.items())],
        }


def _classify_pattern(code: frozenset, policy: frozenset) -> str:
    """The five-way pattern split.

    Empty-set conventions: both empty is consistent; an empty policy with
    non-empty code is uninformed; an empty code side with a non-empty
    policy is redundant.
    """
    if code == policy:
        return OVERLAP_CONSISTENT
    if policy < code:
        return OVERLAP_UNINFORMED
    if code < policy:
        return OVERLAP_REDUNDANT
    if not (code & policy):
        return SEPARATION
    return INTERSECTION


def _as_frozen(practices: Iterable[DataPractice]) -> frozenset:
    return frozenset(practices)


def compare(code: Iterable[DataPractice],
            policy: Iterable[DataPractice]) -> ConsistencyResult:
    """Full comparison: pattern plus strong/weak findings."""
    code_set = _as_frozen(code)
    policy_set = _as_frozen(policy)
    result = ConsistencyResult(
        pattern=_classify_pattern(code_set, policy_set),
        code_set=code_set,
        policy_set=policy_set,
    )

    code_types: dict[str, set[str]] = {}
    for practice in code_set:
        code_types.setdefault(practice.data_type, set()).add(practice.operation)
    policy_types: dict[str, set[str]] = {}
    for practice in policy_set:
        policy_types.setdefault(practice.data_type, set()).add(practice.operation)

    for data_type, operations in code_types.items():
        if data_type not in policy_types:
            result.strong_uninformed.add(data_type)
        else:
            missing = operations - policy_types[data_type]
            if missing:
                result.weak_uninformed[data_type] = frozenset(missing)
    for data_type, operations in policy_types.items():
        if data_type not in code_types:
            result.strong_redundant.add(data_type)
        else:
            missing = operations - code_types[data_type]
            if missing:
                result.weak_redundant[data_type] = frozenset(missing)
    return result


def compare_projections(code: Iterable[DataPractice],
                        policy: Iterable[DataPractice]) -> tuple[str, str, str]:
    """Pattern labels for practice tuples, type-only and operation-only
    projections, in that order."""
    code_set = _as_frozen(code)
    policy_set = _as_frozen(policy)
    practice = _classify_pattern(code_set, policy_set)
    types = _classify_pattern(
        frozenset(p.data_type for p in code_set),
        frozenset(p.data_type for p in policy_set))
    operations = _classify_pattern(
        frozenset(p.operation for p in code_set),
        frozenset(p.operation for p in policy_set))
    return practice, types, operations
