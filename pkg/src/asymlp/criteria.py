"""Finite-certificate checkers for the total-boundedness conditions.

Three conditions characterise totally bounded families in the clamped
metric: (i) small tails beyond some radius R, (ii) small translation
defects for shifts below some r, (iii) small superlevel measure above
some cut M.  The classical unclamped analogues of (i) and (ii) are
checked too, as a contrast diagnostic.

Everything here is a finite certificate: witnesses come from a doubling
scan plus bisection refinement and are re-verified by direct integration
for every member; translation is quantified over a declared finite shift
lattice, never over all real shifts; reports carry the family horizon K
and all scan bounds so a "pass" can be read at face value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .families import FamilySpec
from .grid import GridError, GridFunction
from .norms import lp_norm
from .quadrature import (
    AbsPower,
    ClampPower,
    Outside,
    Transform,
    integrate_transformed,
    superlevel_measure,
    translation_defect,
    translation_defect_bounds,
)

__all__ = [
    "ShiftLattice",
    "ConditionOutcome",
    "ConditionReport",
    "check_tail",
    "check_translation",
    "check_level",
    "check_kr_lp",
    "full_report",
]

_BISECT_STEPS = 8
ALPHA_CONDITIONS = ("tail", "translation", "level")
LP_CONDITIONS = ("lp-tail", "lp-translation")


@dataclass(frozen=True)
class ShiftLattice:
    """Finite symmetric set of shifts: +als and -step*j for j = 1..count."""

    step: Fraction
    count: int = 16

    def __post_init__(self):
        if self.step <= 0:
            raise GridError("shift lattice step must be positive")
        if self.count < 1:
            raise GridError("shift lattice needs at least one shift")
        object.__setattr__(self, "step", Fraction(self.step))
        object.__setattr__(self, "count", int(self.count))

    @classmethod
    def default_for(cls, family: FamilySpec) -> "ShiftLattice":
        return cls(step=family.min_spacing(), count=16)

    def magnitudes(self) -> list[Fraction]:
        return [self.step * j for j in range(1, self.count + 1)]

    def shifts(self) -> list[Fraction]:
        out: list[Fraction] = []
        for m in self.magnitudes():
            out.extend((m, -m))
        return out

    def describe(self) -> dict:
        return {"step": str(self.step), "count": self.count, "signed": True}


@dataclass(frozen=True)
class ConditionOutcome:
    """Verdict for one condition at one eps, with witness or offender."""

    condition: str
    eps: float
    verdict: str  # "pass" | "fail" | "rejected"
    witness: float | None = None
    offender_index: int | None = None
    offending_value: float | None = None
    offending_shift: float | None = None
    detail: str = ""
    scan: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def __str__(self) -> str:
        head = f"{self.condition:<14} eps={self.eps:<6g} {self.verdict}"
        if self.verdict == "pass" and self.witness is not None:
            return f"{head} (witness {self.witness:.6g})"
        if self.verdict == "fail" and self.offender_index is not None:
            shift = (
                f" at shift {self.offending_shift:.6g}"
                if self.offending_shift is not None
                else ""
            )
            return (
                f"{head} (member {self.offender_index}: "
                f"{self.offending_value:.6g}{shift})"
            )
        return f"{head} ({self.detail})" if self.detail else head


@dataclass(frozen=True)
class ConditionReport:
    """All requested conditions for one family at each requested eps."""

    family: str
    p: float
    K: int
    entries: tuple[ConditionOutcome, ...]

    def entry(self, condition: str, eps: float) -> ConditionOutcome:
        for e in self.entries:
            if e.condition == condition and e.eps == eps:
                return e
        raise KeyError(f"no entry for {condition} at eps={eps}")

    @property
    def candidate_totally_bounded(self) -> bool:
        """True when conditions (i)-(iii) pass for every requested eps."""
        alpha = [e for e in self.entries if e.condition in ALPHA_CONDITIONS]
        return bool(alpha) and all(e.passed for e in alpha)

    def __str__(self) -> str:
        lines = [f"family {self.family!r} (K={self.K}, p={self.p:g})"]
        lines += [f"  {e}" for e in self.entries]
        lines.append(
            "  candidate totally bounded: "
            + ("yes" if self.candidate_totally_bounded else "no")
        )
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# witness search plumbing
# ---------------------------------------------------------------------------

def _worst(family: FamilySpec, value_at: Callable[[GridFunction], float]):
    worst, worst_idx = -math.inf, family.indices[0]
    for idx, m in zip(family.indices, family.members):
        v = value_at(m)
        if v > worst:
            worst, worst_idx = v, idx
    return worst, worst_idx


def _search_up(
    family: FamilySpec,
    valuator: Callable[[GridFunction, float], float],
    threshold: float,
    first: float,
    bound: float,
):
    """Doubling candidates first, 2*first, ... <= bound; bisect after a pass.

    Returns (witness or None, last_fail_eval, fail_eval_at_largest, evals)
    where the eval tuples are (candidate, worst value, worst index).
    """
    evals = 0
    cand = first
    last_fail = None
    while cand <= bound * (1.0 + 1e-12):
        worst, idx = _worst(family, lambda m: valuator(m, cand))
        evals += 1
        if worst < threshold:
            lo = last_fail[0] if last_fail is not None else None
            hi = cand
            if lo is not None:
                for _ in range(_BISECT_STEPS):
                    mid = 0.5 * (lo + hi)
                    w, _ = _worst(family, lambda m: valuator(m, mid))
                    evals += 1
                    if w < threshold:
                        hi = mid
                    else:
                        lo = mid
            return hi, last_fail, evals
        last_fail = (cand, worst, idx)
        cand *= 2.0
    return None, last_fail, evals


def _reverify(
    family: FamilySpec,
    valuator: Callable[[GridFunction, float], float],
    threshold: float,
    witness: float,
) -> float:
    """Recompute the defining quantity for every member at the witness."""
    worst, idx = _worst(family, lambda m: valuator(m, witness))
    if not worst < threshold:
        raise GridError(
            f"witness {witness!r} failed re-verification on member {idx} "
            f"({worst!r} >= {threshold!r})"
        )
    return worst


def _tail_horizon(family: FamilySpec, threshold: float, p: float, clamped: bool) -> float:
    """Radius beyond which every live tail alone stays under the threshold."""
    live = [m.tail for m in family.members if not m.tail.is_zero]
    if not live:
        return 0.0
    X = 1.0
    for _ in range(60):
        vals = [
            t.clamp_power_integral(p, X) if clamped else t.abs_power_integral(p, X)
            for t in live
        ]
        if max(vals) < threshold:
            return X
        X *= 2.0
    raise GridError("tail horizon search did not terminate; tails too heavy")


def _tail_condition(
    family: FamilySpec, eps: float, transform: Transform, condition: str
) -> ConditionOutcome:
    if eps <= 0:
        raise GridError("eps must be positive")
    p = family.p
    threshold = eps**p
    clamped = isinstance(transform, ClampPower)
    first = float(family.min_spacing())
    bound = float(family.max_box_radius()) + _tail_horizon(
        family, threshold, p, clamped
    )

    def valuator(m: GridFunction, R: float) -> float:
        return integrate_transformed(m, transform, Outside(R))

    witness, last_fail, evals = _search_up(family, valuator, threshold, first, bound)
    scan = {
        "kind": "doubling+bisect",
        "from": first,
        "to": bound,
        "evaluations": evals,
        "threshold": threshold,
    }
    if witness is None:
        cand, worst, idx = last_fail if last_fail else (bound, math.inf, family.indices[0])
        return ConditionOutcome(
            condition, eps, "fail",
            offender_index=idx, offending_value=worst,
            detail=f"no radius up to {bound:.6g} works; value at R={cand:.6g}",
            scan=scan,
        )
    slack = _reverify(family, valuator, threshold, witness)
    return ConditionOutcome(
        condition, eps, "pass", witness=witness,
        detail=f"worst member integral {slack:.6g} < {threshold:.6g}",
        scan=scan,
    )


def check_tail(family: FamilySpec, eps: float) -> ConditionOutcome:
    """Condition (i): clamp integral beyond radius R below eps**p, all members."""
    return _tail_condition(family, eps, ClampPower(family.p), "tail")


def check_level(family: FamilySpec, eps: float) -> ConditionOutcome:
    """Condition (iii): measure of {|f| > M} below eps for some scanned M."""
    if eps <= 0:
        raise GridError("eps must be positive")
    bound = family.sup_abs() + 1.0

    def valuator(m: GridFunction, M: float) -> float:
        return superlevel_measure(m, M)

    witness, last_fail, evals = _search_up(family, valuator, eps, 1.0, bound)
    scan = {
        "kind": "doubling+bisect",
        "from": 1.0,
        "to": bound,
        "evaluations": evals,
        "threshold": eps,
    }
    if witness is None:
        cand, worst, idx = last_fail if last_fail else (bound, math.inf, family.indices[0])
        return ConditionOutcome(
            "level", eps, "fail",
            offender_index=idx, offending_value=worst,
            detail=f"no cut up to {bound:.6g} works; measure at M={cand:.6g}",
            scan=scan,
        )
    slack = _reverify(family, valuator, eps, witness)
    return ConditionOutcome(
        "level", eps, "pass", witness=witness,
        detail=f"worst superlevel measure {slack:.6g} < {eps:.6g}",
        scan=scan,
    )


def _defect(m: GridFunction, y: Fraction, transform: Transform) -> float:
    if m.tail.is_zero:
        return translation_defect(m, y, transform)
    return translation_defect_bounds(m, y, transform)[1]


def _translation_condition(
    family: FamilySpec,
    eps: float,
    lattice: ShiftLattice,
    transform: Transform,
    condition: str,
) -> ConditionOutcome:
    if eps <= 0:
        raise GridError("eps must be positive")
    threshold = eps**family.p
    certified = any(not m.tail.is_zero for m in family.members)
    scan = {
        "kind": "lattice-prefix",
        "lattice": lattice.describe(),
        "threshold": threshold,
        "certified_upper_bounds": certified,
    }
    evals = 0
    passing: list[Fraction] = []
    violation = None  # (magnitude, signed shift, worst, idx)
    for mag in lattice.magnitudes():
        for y in (mag, -mag):
            worst, idx = _worst(family, lambda m: _defect(m, y, transform))
            evals += 1
            if not worst < threshold:
                violation = (mag, y, worst, idx)
                break
        if violation is not None:
            break
        passing.append(mag)

    # Re-verify the claimed prefix by recomputing every defect from scratch.
    for mag in passing:
        for y in (mag, -mag):
            worst, idx = _worst(family, lambda m: _defect(m, y, transform))
            evals += 1
            if not worst < threshold:
                raise GridError(
                    f"shift {float(y):.6g} failed re-verification on member {idx}"
                )
    scan["evaluations"] = evals

    if violation is not None and not passing:
        mag, y, worst, idx = violation
        return ConditionOutcome(
            condition, eps, "fail",
            offender_index=idx, offending_value=worst,
            offending_shift=float(y),
            detail="smallest scanned shift already violates"
            + (" (certified upper bound)" if certified else ""),
            scan=scan,
        )
    if violation is not None:
        mag, y, worst, idx = violation
        return ConditionOutcome(
            condition, eps, "pass", witness=float(mag),
            detail=(
                f"all scanned |y| < {float(mag):.6g} satisfy the bound; "
                f"first violation at y={float(y):.6g} (member {idx}, {worst:.6g})"
            ),
            scan=scan,
        )
    r = lattice.magnitudes()[-1] + lattice.step
    return ConditionOutcome(
        condition, eps, "pass", witness=float(r),
        detail="every scanned shift satisfies the bound",
        scan=scan,
    )


def check_translation(
    family: FamilySpec, eps: float, lattice: ShiftLattice | None = None
) -> ConditionOutcome:
    """Condition (ii): clamp defect below eps**p for all scanned shifts |y| < r.

    Zero-tail members are integrated exactly for every rational shift;
    live-tail members contribute a certified upper bound (exact grid part
    plus onset-strip and tail-difference bounds).
    """
    if lattice is None:
        lattice = ShiftLattice.default_for(family)
    return _translation_condition(
        family, eps, lattice, ClampPower(family.p), "translation"
    )


def check_kr_lp(
    family: FamilySpec, eps: float, lattice: ShiftLattice | None = None
) -> tuple[ConditionOutcome, ConditionOutcome]:
    """Classical unclamped analogues (lp-tail, lp-translation).

    Families containing a member with infinite p-norm are out of scope for
    the classical conditions and yield "rejected" entries naming it.
    """
    if lattice is None:
        lattice = ShiftLattice.default_for(family)
    p = family.p
    infinite = [
        idx
        for idx, m in zip(family.indices, family.members)
        if lp_norm(m, p) == math.inf
    ]
    if infinite:
        detail = f"members with infinite p-norm: {infinite}"
        scan = {"kind": "rejected"}
        return (
            ConditionOutcome("lp-tail", eps, "rejected", detail=detail, scan=scan),
            ConditionOutcome("lp-translation", eps, "rejected", detail=detail, scan=scan),
        )
    tail = _tail_condition(family, eps, AbsPower(p), "lp-tail")
    trans = _translation_condition(family, eps, lattice, AbsPower(p), "lp-translation")
    return tail, trans


def full_report(
    family: FamilySpec,
    eps_list: list[float] | tuple[float, ...],
    lattice: ShiftLattice | None = None,
    include_lp: bool = True,
) -> ConditionReport:
    """All condition checks for each eps, aggregated deterministically."""
    if not eps_list:
        raise GridError("at least one eps required")
    if lattice is None:
        lattice = ShiftLattice.default_for(family)
    entries: list[ConditionOutcome] = []
    for eps in eps_list:
        entries.append(check_tail(family, eps))
        entries.append(check_translation(family, eps, lattice))
        entries.append(check_level(family, eps))
        if include_lp:
            entries.extend(check_kr_lp(family, eps, lattice))
    return ConditionReport(
        family=family.name,
        p=family.p,
        K=max(family.indices),
        entries=tuple(entries),
    )
