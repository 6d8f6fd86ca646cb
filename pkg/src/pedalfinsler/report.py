from __future__ import annotations

from dataclasses import dataclass
from typing import Any

CONVEX = "convex"
NOT_CONVEX = "not_convex"
DEGENERATE = "degenerate"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ConvexityReport:
    """Verdict of one convexity engine on one object.

    ``min_value`` is the smallest sampled value of the engine's sign
    functional and ``argmin`` where it occurred (a parameter, a ``(u, v)``
    pair or a direction vector). ``scale`` is a positive magnitude used to
    normalise the margin so different engines can be compared.
    """

    verdict: str
    min_value: float
    argmin: Any
    samples_used: int
    scale: float = 1.0
    engine: str = ""

    @property
    def convex(self) -> bool:
        return self.verdict == CONVEX

    @property
    def margin(self) -> float:
        return self.min_value / self.scale if self.scale > 0 else self.min_value
