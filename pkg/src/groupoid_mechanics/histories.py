"""Piecewise-constant histories over a finite groupoid.

A history dwells on one morphism per time segment.  Histories concatenate
when their time intervals match, reverse by inverting every segment, and
carry an action functional obtained by integrating a time-reversal
invariant function of the current morphism.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .groupoid import FiniteGroupoid

__all__ = [
    "QLagrangianOnK",
    "History",
    "compose_histories",
    "reverse_history",
    "action",
]


@dataclass(frozen=True)
class QLagrangianOnK:
    """A real-valued function on morphisms, with a certificate stating
    whether it is invariant under inversion (``values[a^-1] == values[a]``)."""

    groupoid: FiniteGroupoid
    values: np.ndarray
    tau_invariant: bool = field(init=False)
    tau_defect: float = field(init=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.groupoid.n_morphisms,):
            raise ValueError("one value per morphism required")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)
        inv = np.asarray(self.groupoid.inverse, dtype=np.intp)
        defect = float(np.max(np.abs(v[inv] - v))) if v.size else 0.0
        object.__setattr__(self, "tau_defect", defect)
        object.__setattr__(self, "tau_invariant", defect <= 1e-12)


@dataclass(frozen=True)
class History:
    """An ordered list of (morphism, duration) segments starting at ``t0``.

    Reversed histories keep a monotone time bookkeeping; the reversal is
    recorded in ``is_reversed`` and contributes a global sign to the
    action.
    """

    groupoid: FiniteGroupoid
    segments: tuple[tuple[int, float], ...]
    t0: float = 0.0
    is_reversed: bool = False

    def __post_init__(self):
        segs = tuple((int(m), float(d)) for m, d in self.segments)
        for m, d in segs:
            if not 0 <= m < self.groupoid.n_morphisms:
                raise ValueError(f"morphism index {m} out of range")
            if not d > 0:
                raise ValueError("segment durations must be positive")
        object.__setattr__(self, "segments", segs)

    @property
    def duration(self) -> float:
        return sum(d for _, d in self.segments)

    @property
    def t_end(self) -> float:
        return self.t0 + self.duration

    @property
    def orientation(self) -> str:
        return "reversed" if self.is_reversed else "forward"


def compose_histories(w: History, w2: History, time_tol: float = 1e-9) -> History:
    """Concatenate ``w`` then ``w2``.  Requires both forward-oriented and
    ``w2`` starting where ``w`` ends (in time).  A mismatch between the
    endpoint objects of the adjacent segment morphisms is reported as a
    warning, not an error."""
    if w.groupoid != w2.groupoid:
        raise ValueError("histories live on different groupoids")
    if w.is_reversed or w2.is_reversed:
        raise ValueError("only forward-oriented histories compose")
    if abs(w.t_end - w2.t0) > time_tol:
        raise ValueError(
            f"time mismatch: first history ends at {w.t_end}, second starts at {w2.t0}"
        )
    if w.segments and w2.segments:
        g = w.groupoid
        last = w.segments[-1][0]
        first = w2.segments[0][0]
        if (g.source[last], g.target[last]) != (g.source[first], g.target[first]):
            warnings.warn(
                "adjacent segments have mismatched endpoint objects "
                f"({g.morphisms[last]} then {g.morphisms[first]})",
                stacklevel=2,
            )
    return History(w.groupoid, w.segments + w2.segments, w.t0, False)


def reverse_history(w: History) -> History:
    """Invert every segment morphism, reverse the playback order and flip
    the orientation flag.  An involution: reversing twice returns the
    original history."""
    inv = w.groupoid.inverse
    segments = tuple((inv[m], d) for m, d in reversed(w.segments))
    return History(w.groupoid, segments, w.t0, not w.is_reversed)


def action(ell: QLagrangianOnK, w: History) -> float:
    """Integral of ``ell`` along the history: ``sum ell(m_i) dt_i``, with an
    overall minus sign on reversed histories."""
    if ell.groupoid != w.groupoid:
        raise ValueError("function and history live on different groupoids")
    total = float(sum(ell.values[m] * d for m, d in w.segments))
    return -total if w.is_reversed else total
