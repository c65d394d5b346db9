"""Numeric partial-sum traces, used only to corroborate symbolic verdicts.

A trace records ``S_N = sum_{k<N} |t_k|`` at chosen checkpoints, where ``t``
is either the sequence itself or ``a_k - lim a``.  Divergence is never
concluded from a trace.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .sequences import SeqSpec, max_terms
from .tails import TailSpec

DEFAULT_CEILING = 1e300


class Transform(str, enum.Enum):
    IDENTITY = "identity"
    ALT_SUMS_MINUS_LIMIT = "alt_sums_minus_limit"


@dataclass(frozen=True)
class Checkpoint:
    n: int
    partial_sum: float
    residual: float


@dataclass(frozen=True)
class PartialSumTrace:
    transform: Transform
    checkpoints: Tuple[Checkpoint, ...]
    overflow: bool = False

    @property
    def last(self) -> Checkpoint:
        return self.checkpoints[-1]

    def at(self, n: int) -> Checkpoint:
        for c in self.checkpoints:
            if c.n == n:
                return c
        raise KeyError(n)

    def cauchy_increment(self) -> float:
        """``S_N - S_{N'}`` for the two largest checkpoints ``N' < N``."""
        if len(self.checkpoints) < 2:
            raise ValueError("need at least two checkpoints")
        return self.checkpoints[-1].partial_sum - self.checkpoints[-2].partial_sum

    def to_csv(self) -> str:
        rows = ["N,partial_sum,residual"]
        rows += [f"{c.n},{c.partial_sum:.17g},{c.residual:.17g}" for c in self.checkpoints]
        return "\n".join(rows) + "\n"


def transformed_tail(spec: SeqSpec, transform) -> Optional[TailSpec]:
    """Symbolic description of ``|t_k|`` for the given transform."""
    if Transform(transform) is Transform.IDENTITY:
        return spec.abs_tail()
    return spec.alt_tail()


def transformed_terms(spec: SeqSpec, transform, n: int) -> np.ndarray:
    if Transform(transform) is Transform.IDENTITY:
        return spec.terms(n)
    return spec.alt_tail_terms(n)


def partial_sum_trace(spec: SeqSpec, transform, n_max: int,
                      checkpoints: Sequence[int] = (),
                      ceiling: float = DEFAULT_CEILING) -> PartialSumTrace:
    """Compensated partial sums of ``|t_k|`` for ``k < N`` at each checkpoint.

    Segments between checkpoints are summed with ``math.fsum`` and chained with
    Neumaier's compensation; ``residual`` is the running compensation term.
    """
    transform = Transform(transform)
    n_max = int(n_max)
    if n_max < 1:
        raise ValueError("N must be at least 1")
    if n_max > max(max_terms(), 1):
        raise ValueError(f"N = {n_max} exceeds the term cap {max_terms()} (MHL_MAX_TERMS)")
    points = sorted(set(int(c) for c in checkpoints) | {n_max})
    if points[0] < 1:
        raise ValueError("checkpoints must lie in [1, N]")
    if points[-1] > n_max:
        raise ValueError("checkpoints must lie in [1, N]")

    values = np.abs(transformed_terms(spec, transform, n_max))
    s = c = 0.0
    prev = 0
    out = []
    overflow = False
    for n in points:
        part = math.fsum(values[prev:n])
        t = s + part
        if abs(s) >= abs(part):
            c += (s - t) + part
        else:
            c += (part - t) + s
        s = t
        prev = n
        total = s + c
        if not math.isfinite(total) or total > ceiling:
            overflow = True
        out.append(Checkpoint(n, total, c))
    return PartialSumTrace(transform, tuple(out), overflow)


__all__ = [
    "Checkpoint",
    "DEFAULT_CEILING",
    "PartialSumTrace",
    "Transform",
    "partial_sum_trace",
    "transformed_tail",
    "transformed_terms",
]
