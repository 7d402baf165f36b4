"""Three-valued check results.

Every verifier in this package answers Pass, Fail, or Inconclusive.  Fail
means a counterexample was found; Inconclusive means the sufficient
certificates and bounded searches were exhausted without settling the
question either way.  The distinction matters because most certificates here
are one-directional.
"""

from __future__ import annotations

import enum
from typing import Iterable

__all__ = ["Verdict", "combine_verdicts"]


class Verdict(enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"

    @property
    def exit_code(self) -> int:
        return {Verdict.PASS: 0, Verdict.FAIL: 1, Verdict.INCONCLUSIVE: 2}[self]

    def __str__(self) -> str:
        return self.value

    def to_json(self) -> str:
        return self.value

    @classmethod
    def from_json(cls, data: str) -> "Verdict":
        return cls(data)


def combine_verdicts(parts: Iterable[Verdict]) -> Verdict:
    """Pass only if every part passes; any Fail dominates Inconclusive."""
    result = Verdict.PASS
    for v in parts:
        if v is Verdict.FAIL:
            return Verdict.FAIL
        if v is Verdict.INCONCLUSIVE:
            result = Verdict.INCONCLUSIVE
    return result
