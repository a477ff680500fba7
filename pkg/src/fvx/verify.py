"""Formulation verification against brute-force ground truth.

Support sampling (random integer objectives, LP versus brute-force minimum)
is probabilistic; the membership and exclusion probes are exhaustive.  The
combination certifies that the projection's integral points are exactly the
ground truth: an excluded point is a vertex of the ambient polytope, so it
can never lie in the hull of the remaining points.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import format_rational, point_coords
from .errors import GuardExceeded
from .exactlp import feasible_with_fixings, solve_lp
from .linsys import LinearSystem

ENUM_GUARD_POINTS = 4096
ENUM_GUARD_DIM = 12


def in_convex_hull(point, points: Sequence) -> bool:
    """Exact test: is `point` a convex combination of the explicit `points`?

    Independent of any formulation under test; one multiplier per point.
    For binary points removed from a 0-1 vertex set this is always False
    (vertices are extreme), but removed integral points that are not
    vertices can legitimately stay inside the hull of the rest.
    """
    pts = [point_coords(p) if not isinstance(p, tuple) else p for p in points]
    target = point_coords(point) if not isinstance(point, tuple) else point
    if not pts:
        return False
    n = len(target)
    names = tuple(f"mu{i + 1}" for i in range(len(pts)))
    rows = []
    for i in range(n):
        coeffs = {names[j]: p[i] for j, p in enumerate(pts) if p[i]}
        rows.append((coeffs, "=", target[i]))
    rows.append(({name: 1 for name in names}, "=", 1))
    bounds = {name: (Fraction(0), None) for name in names}
    system = LinearSystem.build(0, names, rows, bounds)
    return feasible_with_fixings(system, {})


@dataclass
class VerificationReport:
    trials: int
    seed: int
    support_mismatches: list = field(default_factory=list)
    excluded_failures: list = field(default_factory=list)
    membership_failures: list = field(default_factory=list)
    size_ok: bool = True
    counted: int = 0
    certified: Optional[int] = None

    @property
    def passed(self) -> bool:
        return (not self.support_mismatches and not self.excluded_failures
                and not self.membership_failures and self.size_ok)

    def to_dict(self) -> dict:
        return {
            "verdict": "pass" if self.passed else "fail",
            "trials": self.trials,
            "seed": self.seed,
            "support_mismatches": [
                {"objective": list(c),
                 "lp": None if lp is None else format_rational(lp),
                 "brute": None if bf is None else format_rational(bf)}
                for c, lp, bf in self.support_mismatches
            ],
            "excluded_failures": [list(p) for p in self.excluded_failures],
            "membership_failures": [list(p) for p in self.membership_failures],
            "size_ok": self.size_ok,
            "counted_inequalities": self.counted,
            "certified": self.certified,
        }


def verify_formulation(system: LinearSystem, ground_truth: Iterable,
                       X: Iterable = (), trials: int = 50,
                       seed: int = 0) -> VerificationReport:
    """Check a formulation against an explicit allowed-vertex list.

    Runs `trials` random integer objectives in [-100, 100]^n comparing the LP
    minimum with the brute-force minimum over `ground_truth`, then probes
    every allowed point for membership and every point of X for exclusion
    (exclusion expected exactly when the point is outside the hull of the
    ground truth, which for removed vertices is always), then audits the
    size certificate.  Deterministic for a fixed seed.
    """
    n = system.n_original
    truth = [point_coords(p) if not isinstance(p, tuple) else p for p in ground_truth]
    removed = [point_coords(p) if not isinstance(p, tuple) else p for p in X]
    if n > ENUM_GUARD_DIM:
        raise GuardExceeded(f"dimension {n} exceeds the enumeration guard {ENUM_GUARD_DIM}")
    if len(truth) > ENUM_GUARD_POINTS:
        raise GuardExceeded(f"{len(truth)} ground-truth points exceed the "
                            f"guard {ENUM_GUARD_POINTS}")
    report = VerificationReport(trials=trials, seed=seed)
    rng = random.Random(seed)
    names = [f"x{i + 1}" for i in range(n)]

    for _ in range(trials):
        c = [rng.randint(-100, 100) for _ in range(n)]
        lp = solve_lp(system, c, sense="min")
        brute = None
        if truth:
            brute = min(sum(ci * vi for ci, vi in zip(c, p)) for p in truth)
        if truth:
            if not lp.is_optimal or lp.value != brute:
                report.support_mismatches.append(
                    (tuple(c), lp.value if lp.is_optimal else None, Fraction(brute)))
        else:
            if not lp.is_infeasible:
                report.support_mismatches.append(
                    (tuple(c), lp.value if lp.is_optimal else None, None))

    for p in truth:
        if not feasible_with_fixings(system, dict(zip(names, p))):
            report.membership_failures.append(p)
    for p in removed:
        probe = feasible_with_fixings(system, dict(zip(names, p)))
        # a removed vertex must probe infeasible; a removed non-vertex point
        # may lie in the hull of the rest, so compare against the exact
        # explicit-point hull membership
        if probe != in_convex_hull(p, truth):
            report.excluded_failures.append(p)

    report.counted = system.counted_inequalities()
    report.certified = system.meta.get("certified")
    if report.certified is not None:
        report.size_ok = report.counted <= report.certified
    return report
