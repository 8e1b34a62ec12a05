"""Result records shared by the invariant computations."""

from __future__ import annotations

from dataclasses import dataclass, field


def quantize(value: float, step: float = 1.0):
    """Nearest multiple of ``step``; returned as int when it is integral."""
    q = round(value / step) * step
    return int(q) if float(q).is_integer() else q


@dataclass(frozen=True)
class InvariantResult:
    """A numerically evaluated invariant.

    ``raw`` is the value in the primary convention of the computation,
    ``normalized`` the same quantity in the alternative normalization named
    in ``metadata``, and ``rounded`` the nearest admissible quantized value.
    Nothing is rounded silently: ``deviation`` is always available.
    """

    raw: float
    normalized: float
    rounded: float
    residual: float
    metadata: dict = field(default_factory=dict)

    @property
    def deviation(self) -> float:
        return abs(self.raw - self.rounded)

    def to_dict(self) -> dict:
        return {
            "raw": float(self.raw),
            "normalized": float(self.normalized),
            "rounded": self.rounded,
            "deviation": float(self.deviation),
            "residual": float(self.residual),
            "metadata": dict(self.metadata),
        }
