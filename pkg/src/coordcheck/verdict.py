"""Three-valued decision records."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any


class Status(str, Enum):
    PROVEN = "Proven"
    REFUTED = "Refuted"
    EXHAUSTED = "Exhausted"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Verdict:
    """Outcome of a decision procedure.

    ``Proven`` and ``Refuted`` always carry a witness; ``Exhausted`` carries
    the bound that ran out.
    """

    status: Status
    witness: Any = None
    note: str = ""

    def __post_init__(self):
        if self.witness is None:
            raise ValueError(f"{self.status} verdict requires a witness or bound")

    @property
    def proven(self) -> bool:
        return self.status is Status.PROVEN

    @property
    def refuted(self) -> bool:
        return self.status is Status.REFUTED

    @property
    def exhausted(self) -> bool:
        return self.status is Status.EXHAUSTED


def proven(witness, note=""):
    return Verdict(Status.PROVEN, witness, note)


def refuted(witness, note=""):
    return Verdict(Status.REFUTED, witness, note)


def exhausted(bound, note=""):
    return Verdict(Status.EXHAUSTED, bound, note)
