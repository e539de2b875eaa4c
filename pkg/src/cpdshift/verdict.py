"""Structured results of decision procedures.

A Verdict carries a three-valued outcome, the name of the operation that
produced it, the tag of the rule that certified the answer, and whatever
certificate data the rule yields.  Sufficient criteria answer "yes" when their
hypotheses hold; "no" means the hypotheses fail, not that the opposite
property was certified, unless the rule itself is a characterization.
"""

from __future__ import annotations

from dataclasses import dataclass, field

YES = "yes"
NO = "no"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    outcome: str
    criterion: str
    citation: str
    witness: dict = field(default_factory=dict)
    note: str = ""

    def __post_init__(self):
        if self.outcome not in (YES, NO, INCONCLUSIVE):
            raise ValueError(f"unknown outcome {self.outcome!r}")

    @property
    def is_yes(self) -> bool:
        return self.outcome == YES

    @property
    def is_no(self) -> bool:
        return self.outcome == NO

    @property
    def is_inconclusive(self) -> bool:
        return self.outcome == INCONCLUSIVE

    def to_json(self) -> dict:
        doc = {
            "criterion": self.criterion,
            "outcome": self.outcome,
            "witnesses": dict(self.witness),
            "citation": self.citation,
        }
        if self.note:
            doc["note"] = self.note
        return doc


class InvalidTripletError(ValueError):
    """Raised when an operation requires a validated triplet and got none."""


class NotApplicableError(ValueError):
    """Raised when a criterion's standing hypotheses exclude the input."""
