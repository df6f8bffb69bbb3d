"""Result record returned by the numerical operations."""
from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass
class EvalResult:
    """A complex value with an absolute error estimate and provenance.

    ``method`` is one of ``series``, ``laurent``, ``hankel``,
    ``residue-series`` or ``closed-form``; ``meta`` records the
    truncation and quadrature parameters that produced the value.
    """

    value: complex
    abs_error_estimate: float
    method: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.value = complex(self.value)
        self.abs_error_estimate = float(self.abs_error_estimate)
        if not (self.abs_error_estimate >= 0 and math.isfinite(self.abs_error_estimate)):
            raise ValueError("abs_error_estimate must be finite and non-negative")

    def __complex__(self) -> complex:
        return self.value
