"""Evaluation reports: value + error estimate + convergence diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class EvaluationReport:
    """Result of a numerical evaluation.

    value is complex even for real-valued quantities (imag ~ 0 there);
    abs_error_estimate is a conservative absolute error bound estimate;
    converged=False means the result did not meet the requested tolerance
    and callers must apply their error policy (the CLI exits 3).
    """

    value: complex
    abs_error_estimate: float
    converged: bool = True
    diagnostics: list[tuple[str, float]] = field(default_factory=list)

    def __post_init__(self):
        if not self.abs_error_estimate >= 0.0:
            raise ValueError("abs_error_estimate must be non-negative")

    @property
    def real(self) -> float:
        return complex(self.value).real

    def diagnostic(self, name: str, default: float = float("nan")) -> float:
        for key, val in self.diagnostics:
            if key == name:
                return val
        return default

    def add_diagnostic(self, name: str, value: float) -> None:
        self.diagnostics.append((name, float(value)))
