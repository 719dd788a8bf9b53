"""Covering nets in the clamped metric: greedy construction and certification.

A net is a finite set of member-centred balls of radius eps covering the
family.  greedy_net picks the lowest-index uncovered member as the next
center, so outputs are deterministic.  truncation_lift_net follows the
constructive route through a level cut: members are truncated at a cut M
whose superlevel measure is below (eta/2)**p, an unclamped (eta/2)-net is
built on the truncated family, and the triangle inequality lifts it to an
eta-net for the originals in the clamped metric — re-verified directly.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .families import FamilySpec
from .grid import GridError, GridFunction
from .norms import alpha_distance, lp_distance
from .operators import truncate
from .quadrature import superlevel_measure

__all__ = [
    "EpsNet",
    "CoveringCheck",
    "LevelConditionError",
    "pairwise_distances",
    "greedy_net",
    "verify_covering",
    "covering_profile",
    "truncation_lift_net",
]


class LevelConditionError(GridError):
    """The level condition fails at the requested budget; carries the offender."""

    def __init__(self, message: str, offender_index: int, offending_value: float):
        super().__init__(message)
        self.offender_index = offender_index
        self.offending_value = offending_value


@dataclass(frozen=True, eq=False)
class EpsNet:
    """Covering certificate: centers, assignment, and the realised radii.

    centers[j] is a grid function (a family member for the greedy method,
    a truncated member for the lift); center_indices[j] is the family
    index it came from.  assignment[i] is the center position covering
    member i, distances[i] the recomputed clamped distance.
    """

    eps: float
    p: float
    method: str
    center_indices: tuple[int, ...]
    centers: tuple[GridFunction, ...]
    assignment: tuple[int, ...]
    distances: tuple[float, ...]
    max_assigned_distance: float
    extras: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.centers)

    def __str__(self) -> str:
        return (
            f"{self.method} net: {self.size} centers at eps={self.eps:g} "
            f"(max assigned distance {self.max_assigned_distance:.6g})"
        )


@dataclass(frozen=True)
class CoveringCheck:
    passed: bool
    max_distance: float
    slack: float
    failures: tuple[tuple[int, float], ...]

    def __str__(self) -> str:
        if self.passed:
            return f"covering verified (slack {self.slack:.6g})"
        worst = ", ".join(f"member {i}: {d:.6g}" for i, d in self.failures[:3])
        return f"covering FAILED ({worst})"


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("ASYMLP_THREADS", "1")))
    except ValueError:
        return 1


def pairwise_distances(family: FamilySpec) -> np.ndarray:
    """Symmetric matrix of clamped distances between members.

    Rows are computed in parallel when ``ASYMLP_THREADS`` is set above 1;
    each entry lands at a fixed index, so the result does not depend on
    the thread count.
    """
    n = len(family.members)
    out = np.zeros((n, n))

    def fill_row(i: int) -> None:
        for j in range(i + 1, n):
            d = alpha_distance(family.members[i], family.members[j], family.p)
            out[i, j] = out[j, i] = d

    workers = _thread_count()
    if workers == 1 or n < 4:
        for i in range(n):
            fill_row(i)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill_row, range(n)))
    return out


def _greedy(
    members: Iterable[GridFunction],
    eps: float,
    metric: Callable[[GridFunction, GridFunction], float],
):
    """Streaming greedy cover: first-fit against centers in creation order."""
    centers: list[GridFunction] = []
    center_pos: list[int] = []
    assignment: list[int] = []
    distances: list[float] = []
    for pos, m in enumerate(members):
        hit = None
        for j, c in enumerate(centers):
            d = metric(m, c)
            if d < eps:
                hit = (j, d)
                break
        if hit is None:
            centers.append(m)
            center_pos.append(pos)
            assignment.append(len(centers) - 1)
            distances.append(0.0)
        else:
            assignment.append(hit[0])
            distances.append(hit[1])
    return centers, center_pos, assignment, distances


def greedy_net(family: FamilySpec, eps: float) -> EpsNet:
    """Deterministic lowest-index-first greedy eps-net under the clamped metric."""
    if eps <= 0:
        raise GridError("eps must be positive")
    metric = lambda a, b: alpha_distance(a, b, family.p)
    centers, center_pos, assignment, distances = _greedy(family.members, eps, metric)
    return EpsNet(
        eps=float(eps),
        p=family.p,
        method="greedy",
        center_indices=tuple(family.indices[pos] for pos in center_pos),
        centers=tuple(centers),
        assignment=tuple(assignment),
        distances=tuple(distances),
        max_assigned_distance=max(distances),
    )


def verify_covering(family: FamilySpec, net: EpsNet) -> CoveringCheck:
    """Recompute every assigned clamped distance from scratch; strict radii."""
    n = len(family.members)
    if len(net.assignment) != n:
        raise GridError(
            f"net assigns {len(net.assignment)} members, family has {n}"
        )
    if any(not (0 <= j < net.size) for j in net.assignment):
        raise GridError("net assignment refers to a missing center")
    failures = []
    worst = 0.0
    for i, m in enumerate(family.members):
        d = alpha_distance(m, net.centers[net.assignment[i]], family.p)
        worst = max(worst, d)
        if not d < net.eps:
            failures.append((family.indices[i], d))
    return CoveringCheck(
        passed=not failures,
        max_distance=worst,
        slack=net.eps - worst,
        failures=tuple(failures),
    )


def covering_profile(
    family: FamilySpec, eps: float, K_list: Iterable[int]
) -> list[int]:
    """Greedy net sizes N(eps, K) over the first K members, streamed.

    Generator-backed families are streamed one member at a time, so the
    profile can run far beyond the materialised prefix while only the
    current centers stay in memory.
    """
    Ks = sorted(set(int(K) for K in K_list))
    if not Ks or Ks[0] < 1:
        raise GridError("profile horizons must be positive")
    metric = lambda a, b: alpha_distance(a, b, family.p)
    centers: list[GridFunction] = []
    sizes: dict[int, int] = {}
    targets = iter(Ks)
    target = next(targets)
    k = 0
    while True:
        k += 1
        if family.generator is not None:
            m = family.generator(k)
        else:
            if k > len(family.members):
                raise GridError(
                    f"profile horizon {target} exceeds the materialised family"
                )
            m = family.members[k - 1]
        if not any(metric(m, c) < eps for c in centers):
            centers.append(m)
        if k == target:
            sizes[target] = len(centers)
            nxt = next(targets, None)
            if nxt is None:
                break
            target = nxt
    return [sizes[K] for K in Ks]


def _find_level_cut(family: FamilySpec, budget: float) -> tuple[float, float]:
    """Smallest scanned M > 1 with all superlevel measures below the budget."""
    bound = family.sup_abs() + 1.0
    cand = 2.0
    last_fail = None
    while cand <= bound * (1.0 + 1e-12) or last_fail is None:
        worst, idx = -math.inf, family.indices[0]
        for i, m in zip(family.indices, family.members):
            v = superlevel_measure(m, cand)
            if v > worst:
                worst, idx = v, i
        if worst < budget:
            lo = last_fail[0] if last_fail is not None else 1.0
            hi = cand
            for _ in range(8):
                mid = 0.5 * (lo + hi)
                if mid <= 1.0:
                    break
                w = max(superlevel_measure(m, mid) for m in family.members)
                if w < budget:
                    hi = mid
                else:
                    lo = mid
            return hi, worst
        last_fail = (cand, worst, idx)
        if cand > bound:
            break
        cand *= 2.0
    _, worst, idx = last_fail
    raise LevelConditionError(
        f"family violates the level condition at budget {budget:.6g}: "
        f"member {idx} has superlevel measure {worst:.6g} at the largest "
        f"scanned cut",
        offender_index=idx,
        offending_value=worst,
    )


def truncation_lift_net(family: FamilySpec, eta: float) -> EpsNet:
    """Constructive eta-net via truncation at a level cut.

    (1) find M > 1 with |{|f| > M}| < (eta/2)**p for every member;
    (2) truncate every member at M — the clamped distance to the original
        is then below eta/2, since the difference lives on the superlevel set;
    (3) build a greedy (eta/2)-net on the truncated family in the
        unclamped p-metric, which dominates the clamped one;
    (4) the truncated centers form an eta-net for the originals, re-verified
        here in the clamped metric member by member.
    """
    if eta <= 0:
        raise GridError("eta must be positive")
    p = family.p
    budget = (eta / 2.0) ** p
    M, worst_level = _find_level_cut(family, budget)
    truncated = [truncate(m, M) for m in family.members]
    metric = lambda a, b: lp_distance(a, b, p)
    centers, center_pos, assignment, _ = _greedy(truncated, eta / 2.0, metric)

    distances = [
        alpha_distance(m, centers[assignment[i]], p)
        for i, m in enumerate(family.members)
    ]
    worst = max(distances)
    if not worst < eta:
        raise GridError(
            f"lifted net failed re-verification: distance {worst:.6g} >= {eta:.6g}"
        )
    return EpsNet(
        eps=float(eta),
        p=p,
        method="truncation-lift",
        center_indices=tuple(family.indices[pos] for pos in center_pos),
        centers=tuple(centers),
        assignment=tuple(assignment),
        distances=tuple(distances),
        max_assigned_distance=worst,
        extras={"M": M, "level_budget": budget, "worst_level_measure": worst_level},
    )
