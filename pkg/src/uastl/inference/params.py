"""Run configuration and results shared by the inference algorithms."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from ..formula import Formula, formula_size, print_formula
from ..grammar import PredicateGrammar, default_grammar


class StopReason(str, enum.Enum):
    MARGIN = "margin reached"  # R (or S) attained
    SIZE_CAP = "size cap"  # n went past N
    TIMEOUT = "timeout"


@dataclass
class InferenceParams:
    """Knobs of one inference run.

    ``max_size`` is the iteration/size cap N (an int, or ``math.inf``).
    ``min_robustness`` is the margin R at which the uncertainty-aware loop
    stops; ``min_classification`` is the fraction S at which the sampling
    baselines stop. ``timeout`` (seconds) applies to each solver call.
    """

    max_size: float = 3
    min_robustness: float = 0.0
    min_classification: float = 1.0
    samples_per_interval: int = 200
    seed: int = 0
    timeout: float | None = 1000.0
    max_depth: int | None = None  # decision trees only; None is unbounded
    grammar: PredicateGrammar | None = None

    def __post_init__(self):
        if self.max_size != math.inf and (int(self.max_size) != self.max_size or self.max_size < 1):
            raise ValueError(f"max size must be a positive integer or inf, got {self.max_size}")
        if self.max_size != math.inf:
            self.max_size = int(self.max_size)
        if not 0.0 <= self.min_classification <= 1.0:
            raise ValueError(f"min classification must lie in [0, 1], got {self.min_classification}")
        if self.samples_per_interval < 1:
            raise ValueError("samples per interval must be positive")
        if self.timeout is not None and self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max depth must be non-negative")
        if math.isnan(self.min_robustness):
            raise ValueError("min robustness is NaN")

    def grammar_for(self, dims: int) -> PredicateGrammar:
        g = self.grammar if self.grammar is not None else default_grammar(dims)
        if g.dims != dims:
            raise ValueError(f"grammar has {g.dims} dims but the data has {dims}")
        return g


@dataclass
class InferenceResult:
    """Outcome of ``tli_ua`` (``value`` = F) or ``tli_rs`` (``value`` = s)."""

    formula: Formula
    value: float
    size: int  # the n of the last solve
    stop: StopReason
    seconds: float = 0.0
    models: list = field(default_factory=list)
    history: list = field(default_factory=list)  # (n, value) per iteration
    warnings: list = field(default_factory=list)

    @property
    def formula_text(self) -> str:
        return print_formula(self.formula)

    @property
    def formula_size(self) -> int:
        return formula_size(self.formula)

    @property
    def timed_out(self) -> bool:
        return self.stop is StopReason.TIMEOUT
