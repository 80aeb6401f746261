"""Tiny shared vocabulary for named numerical checks."""

from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class Check:
    """One named check: its pass flag and the worst deviation observed."""

    name: str
    passed: bool
    max_deviation: float

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.passed))
        object.__setattr__(self, "max_deviation", float(self.max_deviation))


def all_passed(checks: Iterable[Check]) -> bool:
    return all(c.passed for c in checks)
