"""Exact rational LP solving: two-phase primal simplex with Bland's rule.

Everything is computed over exact rationals.  Tableau rows are stored as
sparse integer numerator dicts with one positive denominator per row, so all
pivot arithmetic is integer multiply/subtract plus a gcd normalization; no
floating point, no tolerances.  Bland's lowest-index rule is used for both
the entering column and ratio-test ties, which guarantees termination and
makes every answer (including the optimal basic point) deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Mapping, Optional

from .core import Objective, parse_rational
from .errors import DomainError
from .linsys import LinearSystem

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpResult:
    """Outcome of an exact LP solve.

    When optimal, `point` assigns an exact rational to every variable of the
    system and `value` is the objective evaluated at that point.
    """

    status: str
    point: Optional[dict]
    value: Optional[Fraction]

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL

    @property
    def is_infeasible(self) -> bool:
        return self.status == INFEASIBLE

    @property
    def is_unbounded(self) -> bool:
        return self.status == UNBOUNDED


_INFEASIBLE = LpResult(INFEASIBLE, None, None)
_UNBOUNDED = LpResult(UNBOUNDED, None, None)


def _objective_map(system: LinearSystem, objective) -> dict:
    """Normalize an objective (mapping, sequence, or Objective) to name->Fraction."""
    if isinstance(objective, Objective):
        if objective.n != system.n_original:
            raise DomainError("objective dimension mismatch")
        return {f"x{i + 1}": c for i, c in enumerate(objective.c) if c}
    if isinstance(objective, Mapping):
        out = {}
        for name, v in objective.items():
            if name not in system.variables:
                raise DomainError(f"objective references undeclared variable {name!r}")
            q = parse_rational(v)
            if q:
                out[name] = q
        return out
    # positional: applies to the original variables
    terms = list(objective)
    if len(terms) != system.n_original:
        raise DomainError(f"objective has {len(terms)} terms, expected {system.n_original}")
    return {f"x{i + 1}": parse_rational(v) for i, v in enumerate(terms) if parse_rational(v)}


class _Simplex:
    """One solve over a LinearSystem; not reusable."""

    def __init__(self, system: LinearSystem):
        self.system = system
        self.trivially_infeasible = False
        self.var_cols = {}    # name -> ("const", Fraction) | ("pos", col, lo)
                              #        | ("neg", col, hi) | ("split", colp, colm)
        self.rows = []        # [cols dict, rhs int, den int] in standard equality form
        self.basis = []
        self._build_columns()
        self._build_rows()

    # -- construction ----------------------------------------------------------

    def _build_columns(self):
        ncol = 0
        self.bound_rows = []  # (col, limit Fraction) meaning col <= limit
        for name in self.system.variables:
            lo, hi = self.system.bound(name)
            if lo is not None and hi is not None:
                if lo == hi:
                    self.var_cols[name] = ("const", lo)
                    continue
                if hi < lo:
                    self.trivially_infeasible = True
                    self.var_cols[name] = ("const", lo)
                    continue
            if lo is not None:
                self.var_cols[name] = ("pos", ncol, lo)
                if hi is not None:
                    self.bound_rows.append((ncol, hi - lo))
                ncol += 1
            elif hi is not None:
                self.var_cols[name] = ("neg", ncol, hi)
                ncol += 1
            else:
                self.var_cols[name] = ("split", ncol, ncol + 1)
                ncol += 2
        self.nstruct = ncol

    def _transform_row(self, coeffs: Mapping[str, int], rhs) -> tuple:
        """Rewrite a row over variables into one over columns; returns (cols, rhs)."""
        out = {}
        b = Fraction(rhs)
        for name, a in coeffs.items():
            kind = self.var_cols[name]
            if kind[0] == "const":
                b -= a * kind[1]
            elif kind[0] == "pos":
                _, col, lo = kind
                if lo:
                    b -= a * lo
                out[col] = out.get(col, 0) + a
            elif kind[0] == "neg":
                _, col, hi = kind
                b -= a * hi
                out[col] = out.get(col, 0) - a
            else:
                _, cp, cm = kind
                out[cp] = out.get(cp, 0) + a
                out[cm] = out.get(cm, 0) - a
        return {c: v for c, v in out.items() if v}, b

    def _build_rows(self):
        # collect (cols, rel, rhs Fraction); coefficients stay integral except
        # for the rhs, which is rescaled to an integer per row
        pending = []
        for coeffs, rel, rhs in self.system.rows:
            cols, b = self._transform_row(coeffs, rhs)
            if not cols:
                ok = (b >= 0 if rel == "<=" else b <= 0 if rel == ">=" else b == 0)
                if not ok:
                    self.trivially_infeasible = True
                continue
            pending.append((cols, rel, b))
        for col, limit in self.bound_rows:
            if limit < 0:
                self.trivially_infeasible = True
                continue
            pending.append(({col: 1}, "<=", Fraction(limit)))

        nslack = sum(1 for _, rel, _ in pending if rel != "=")
        ncol = self.nstruct
        art_start_guess = ncol + nslack
        art = art_start_guess
        slack = ncol
        self.art_start = art_start_guess
        for cols, rel, b in pending:
            den = b.denominator
            if den != 1:
                cols = {c: v * den for c, v in cols.items()}
                b = b * den
            bi = int(b)
            cols = dict(cols)
            if rel == ">=":
                cols = {c: -v for c, v in cols.items()}
                bi = -bi
                rel = "<="
            basis_col = None
            if rel == "<=":
                cols[slack] = 1
                if bi >= 0:
                    basis_col = slack
                slack += 1
            if bi < 0:
                cols = {c: -v for c, v in cols.items()}
                bi = -bi
            if basis_col is None:
                cols[art] = 1
                basis_col = art
                art += 1
            self.rows.append([cols, bi, 1])
            self.basis.append(basis_col)
        self.ncols = art

    # -- pivoting ---------------------------------------------------------------

    @staticmethod
    def _combine(ci, bi, di, f, prc, prr, prd):
        if prd == 1:
            new = dict(ci)
        else:
            new = {j: v * prd for j, v in ci.items()}
        for j, pv in prc.items():
            t = new.get(j, 0) - f * pv
            if t:
                new[j] = t
            else:
                new.pop(j, None)
        nb = bi * prd - f * prr
        nd = di * prd
        g = gcd(nd, nb)
        if g != 1:
            for v in new.values():
                g = gcd(g, v)
                if g == 1:
                    break
        if g > 1:
            new = {j: v // g for j, v in new.items()}
            nb //= g
            nd //= g
        return [new, nb, nd]

    def _pivot(self, r: int, s: int):
        cols, rhs, den = self.rows[r]
        p = cols[s]
        if p < 0:
            cols = {j: -v for j, v in cols.items()}
            rhs = -rhs
            p = -p
        g = gcd(p, rhs)
        if g != 1:
            for v in cols.values():
                g = gcd(g, v)
                if g == 1:
                    break
        if g > 1:
            cols = {j: v // g for j, v in cols.items()}
            rhs //= g
            p //= g
        self.rows[r] = [cols, rhs, p]
        prc, prr, prd = cols, rhs, p
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[0].get(s)
            if f:
                self.rows[i] = self._combine(row[0], row[1], row[2], f, prc, prr, prd)
        f = self.zc.get(s)
        if f:
            zrow = self._combine(self.zc, self.zrhs, self.zden, f, prc, prr, prd)
            self.zc, self.zrhs, self.zden = zrow
        self.basis[r] = s

    def _bland(self) -> str:
        """Run Bland pivots until optimal or unbounded."""
        rows = self.rows
        basis = self.basis
        while True:
            s = None
            for j, v in self.zc.items():
                if v < 0 and (s is None or j < s):
                    s = j
            if s is None:
                return OPTIMAL
            best_r = -1
            best_rhs = best_num = best_basis = 0
            for i, (cols, rhs, _den) in enumerate(rows):
                a = cols.get(s)
                if a is None or a <= 0:
                    continue
                if best_r < 0:
                    best_r, best_rhs, best_num, best_basis = i, rhs, a, basis[i]
                    continue
                lhs = rhs * best_num
                rhsq = best_rhs * a
                if lhs < rhsq or (lhs == rhsq and basis[i] < best_basis):
                    best_r, best_rhs, best_num, best_basis = i, rhs, a, basis[i]
            if best_r < 0:
                return UNBOUNDED
            self._pivot(best_r, s)

    # -- phases -----------------------------------------------------------------

    def phase1(self) -> bool:
        """Drive artificials to zero; True iff the system is feasible."""
        if self.trivially_infeasible:
            return False
        art_rows = [i for i, b in enumerate(self.basis) if b >= self.art_start]
        if not art_rows:
            self.zc, self.zrhs, self.zden = {}, 0, 1
            return True
        zc = {}
        zrhs = 0
        for i in art_rows:
            cols, rhs, _den = self.rows[i]  # dens are 1 before any pivot
            for j, v in cols.items():
                if j >= self.art_start:
                    continue
                t = zc.get(j, 0) - v
                if t:
                    zc[j] = t
                else:
                    zc.pop(j, None)
            zrhs -= rhs
        self.zc, self.zrhs, self.zden = zc, zrhs, 1
        status = self._bland()
        assert status == OPTIMAL  # phase-1 objective is bounded below by 0
        if self.zrhs < 0:  # optimum of sum of artificials is -zrhs/zden > 0
            return False
        # drive remaining artificials out of the basis (all at value zero)
        for i in range(len(self.rows)):
            if self.basis[i] < self.art_start:
                continue
            cols = self.rows[i][0]
            target = None
            for j, v in cols.items():
                if j < self.art_start and v and (target is None or j < target):
                    target = j
            if target is not None:
                self._pivot(i, target)
        keep = [i for i in range(len(self.rows)) if self.basis[i] < self.art_start]
        self.rows = [self.rows[i] for i in keep]
        self.basis = [self.basis[i] for i in keep]
        for row in self.rows:
            cols = row[0]
            for j in [j for j in cols if j >= self.art_start]:
                del cols[j]
        return True

    def phase2(self, col_obj: Mapping[int, Fraction]) -> str:
        zfrac = dict(col_obj)
        obj = Fraction(0)
        for i, (cols, rhs, den) in enumerate(self.rows):
            cb = col_obj.get(self.basis[i])
            if cb:
                obj += cb * Fraction(rhs, den)
                for j, num in cols.items():
                    zfrac[j] = zfrac.get(j, Fraction(0)) - cb * Fraction(num, den)
        zden = obj.denominator
        for v in zfrac.values():
            zden = zden * v.denominator // gcd(zden, v.denominator)
        self.zc = {j: int(v * zden) for j, v in zfrac.items() if v}
        self.zrhs = int(-obj * zden)
        self.zden = zden
        return self._bland()

    # -- readout ----------------------------------------------------------------

    def column_values(self) -> dict:
        vals = {}
        for i, (cols, rhs, den) in enumerate(self.rows):
            vals[self.basis[i]] = Fraction(rhs, den)
        return vals

    def point(self) -> dict:
        cv = self.column_values()
        zero = Fraction(0)
        out = {}
        for name in self.system.variables:
            kind = self.var_cols[name]
            if kind[0] == "const":
                out[name] = kind[1]
            elif kind[0] == "pos":
                out[name] = kind[2] + cv.get(kind[1], zero)
            elif kind[0] == "neg":
                out[name] = kind[2] - cv.get(kind[1], zero)
            else:
                out[name] = cv.get(kind[1], zero) - cv.get(kind[2], zero)
        return out

    def column_objective(self, obj_map: Mapping[str, Fraction], negate: bool) -> dict:
        col_obj = {}
        for name, c in obj_map.items():
            if negate:
                c = -c
            kind = self.var_cols[name]
            if kind[0] == "const":
                continue
            if kind[0] in ("pos",):
                col_obj[kind[1]] = col_obj.get(kind[1], Fraction(0)) + c
            elif kind[0] == "neg":
                col_obj[kind[1]] = col_obj.get(kind[1], Fraction(0)) - c
            else:
                col_obj[kind[1]] = col_obj.get(kind[1], Fraction(0)) + c
                col_obj[kind[2]] = col_obj.get(kind[2], Fraction(0)) - c
        return {c: v for c, v in col_obj.items() if v}


def solve_lp(system: LinearSystem, objective, sense: str = "min") -> LpResult:
    """Minimize (or maximize) a linear objective over a LinearSystem, exactly.

    `objective` may be an Objective (over x1..xn), a mapping from variable
    names to rationals, or a sequence aligned with the original variables.
    Returns an optimal basic solution, `infeasible`, or `unbounded`; results
    are deterministic for identical inputs.
    """
    if sense not in ("min", "max"):
        raise DomainError(f"sense must be 'min' or 'max', got {sense!r}")
    if not system.variables:
        raise DomainError("system has no variables")
    obj_map = _objective_map(system, objective)
    solver = _Simplex(system)
    if not solver.phase1():
        return _INFEASIBLE
    status = solver.phase2(solver.column_objective(obj_map, negate=(sense == "max")))
    if status == UNBOUNDED:
        return _UNBOUNDED
    point = solver.point()
    value = sum((c * point[name] for name, c in obj_map.items()), start=Fraction(0))
    return LpResult(OPTIMAL, point, value)


def feasible_with_fixings(system: LinearSystem, fixings: Mapping[str, object]) -> bool:
    """Phase-1 feasibility of the system with original variables pinned.

    Fixing keys must be declared variables; values are exact rationals.  An
    empty fixing map tests plain feasibility.
    """
    overrides = {}
    for name, v in fixings.items():
        if name not in system.variables:
            raise DomainError(f"fixing references undeclared variable {name!r}")
        q = parse_rational(v)
        overrides[name] = (q, q)
    solver = _Simplex(system.with_bounds(overrides) if overrides else system)
    return solver.phase1()
