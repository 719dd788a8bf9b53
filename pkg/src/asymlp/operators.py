"""Pointwise and geometric operators: translation, truncation, unit clamp, scaling.

Translation is restricted to grid-aligned shifts so the result is again an
exact grid function; the checkers scan finite shift lattices accordingly.
Truncation and clamping act cell-by-cell and leave power-law tails intact
only when the cut level already dominates the tail (the representation has
no flat-then-power shape); other cases are rejected rather than approximated.
"""
from __future__ import annotations

import numpy as np

from .grid import (
    Fraction,
    FractionLike,
    GridError,
    GridFunction,
    TailSpec,
    ZERO_TAIL,
    as_fraction,
)

__all__ = [
    "MisalignedShiftError",
    "translate",
    "truncate",
    "clamp_unit",
    "scale",
]


class MisalignedShiftError(GridError):
    """Shift off the grid lattice; carries the nearest aligned suggestion."""

    def __init__(self, message: str, suggestion: tuple[Fraction, ...]):
        super().__init__(message)
        self.suggestion = suggestion


def translate(f: GridFunction, y: FractionLike | tuple) -> GridFunction:
    """g with g(x) = f(x + y); each y_j must be an integer multiple of spacing."""
    ys = y if isinstance(y, tuple) else (y,)
    if len(ys) != f.dim:
        raise GridError(f"shift has {len(ys)} components for a {f.dim}-d function")
    if not f.tail.is_zero:
        raise GridError("power-law tails do not translate within this representation")
    shifts = tuple(as_fraction(c) for c in ys)
    nearest = []
    for c, h in zip(shifts, f.spacing):
        q = c / h
        if q.denominator != 1:
            nearest.append(h * round(q))
        else:
            nearest.append(c)
    nearest_t = tuple(nearest)
    if nearest_t != shifts:
        raise MisalignedShiftError(
            f"shift {tuple(str(c) for c in shifts)} is off the grid lattice; "
            f"nearest aligned shift is {tuple(str(c) for c in nearest_t)}",
            nearest_t,
        )
    box = tuple((a - c, b - c) for (a, b), c in zip(f.box, shifts))
    return GridFunction(box, f.spacing, f.values, ZERO_TAIL)


def _tail_after_cut(tail: TailSpec, level: float, op: str) -> TailSpec:
    if tail.is_zero or tail.sup() <= level:
        return tail
    raise GridError(
        f"{op} at level {level:g} cuts into the power-law tail "
        f"(tail sup {tail.sup():g}); the flat-then-power result is not "
        "representable — enlarge the grid box past the cut radius first"
    )


def truncate(f: GridFunction, M: float) -> GridFunction:
    """Pointwise clamp of f to [-M, M]; values at exactly +-M are kept."""
    M = float(M)
    if M <= 0.0:
        raise GridError("truncation level must be positive")
    tail = _tail_after_cut(f.tail, M, "truncation")
    if f.sup_abs() <= M:
        return f
    return GridFunction(f.box, f.spacing, np.clip(f.values, -M, M), tail)


def clamp_unit(f: GridFunction) -> GridFunction:
    """x -> min(|f(x)|, 1), the integrand of the clamped norm; nonnegative."""
    tail = _tail_after_cut(f.tail, 1.0, "unit clamp")
    return GridFunction(f.box, f.spacing, np.minimum(np.abs(f.values), 1.0), tail)


def scale(f: GridFunction, lam: float) -> GridFunction:
    """lam * f; the tail coefficient scales by |lam|."""
    lam = float(lam)
    if f.tail.is_zero or lam == 0.0:
        tail = ZERO_TAIL
        values = f.values * lam if lam != 0.0 else np.zeros_like(f.values)
        return GridFunction(f.box, f.spacing, values, tail)
    tail = TailSpec.power_law(f.tail.coefficient * abs(lam), f.tail.exponent, f.tail.onset)
    return GridFunction(f.box, f.spacing, f.values * lam, tail)
