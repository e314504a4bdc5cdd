"""Pass/fail record shared by the oracle and verification layers."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field


@dataclass
class CheckReport:
    """Outcome of one numerical check; ``passed`` iff ``max_residual < tolerance``."""

    name: str
    max_residual: float
    tolerance: float
    passed: bool = field(init=False)
    grid: str = ""
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        self.max_residual = float(self.max_residual)
        # NaN residuals never pass.
        self.passed = bool(self.max_residual < self.tolerance)

    def to_json(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d
