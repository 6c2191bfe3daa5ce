from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Verdict:
    """Outcome of a property check.

    ``witness`` backs a positive verdict, ``counterexample`` a negative one;
    either may be ``None`` when the check has nothing useful to show.
    """

    property: str
    holds: bool
    params: dict = field(default_factory=dict)
    witness: Any = None
    counterexample: Any = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.holds

    @property
    def label(self) -> str:
        return "holds" if self.holds else "fails"
