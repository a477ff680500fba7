"""Explicit constraint systems over named variables.

A LinearSystem is an extended formulation: the first `n_original` variables
x1..xn are the designated projection; everything else is auxiliary.  Rows
carry integer coefficients and integer right-hand sides (rational input rows
are scaled losslessly).  Variable bounds may be rational.

Size certificates use the extension-complexity counting convention: a row
with relation <= or >= counts one inequality, an equality row counts zero,
and each finite variable bound counts one except fixings l == u (which are
equalities).  `counted_inequalities` implements this metric; meta records
both it and the raw row count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Optional, Sequence, Tuple

from .core import parse_rational
from .errors import DomainError

Bound = Tuple[Optional[Fraction], Optional[Fraction]]


def _scale_row(coeffs: Mapping[str, Fraction], rhs: Fraction):
    """Scale a rational row to integer coefficients and rhs (lossless)."""
    den = rhs.denominator
    for v in coeffs.values():
        den = den * v.denominator // gcd(den, v.denominator)
    out = {name: int(v * den) for name, v in coeffs.items() if v}
    return out, int(rhs * den)


@dataclass(frozen=True)
class LinearSystem:
    variables: tuple          # all variable names, x1..xn first
    n_original: int
    rows: tuple               # of (coeffs: dict name->int, relation, rhs: int)
    bounds: dict              # name -> (lower, upper), entries Fraction | None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        names = set(self.variables)
        if len(names) != len(self.variables):
            raise DomainError("duplicate variable name")
        for i in range(self.n_original):
            if self.variables[i] != f"x{i + 1}":
                raise DomainError("original variables must be named x1..xn, in order")
        for coeffs, rel, rhs in self.rows:
            if rel not in ("<=", "=", ">="):
                raise DomainError(f"unknown relation {rel!r}")
            for name, v in coeffs.items():
                if name not in names:
                    raise DomainError(f"row references undeclared variable {name!r}")
                if not isinstance(v, int):
                    raise DomainError(f"non-integer coefficient {v!r} on {name}")
            if not isinstance(rhs, int):
                raise DomainError(f"non-integer rhs {rhs!r}")
        for name in self.bounds:
            if name not in names:
                raise DomainError(f"bound on undeclared variable {name!r}")
        # crossing bounds are allowed: they simply make the system infeasible

    # -- construction helpers ------------------------------------------------

    @classmethod
    def build(cls, n_original: int, aux: Sequence[str] = (), rows: Iterable = (),
              bounds: Mapping[str, Bound] = None, meta: Mapping = None) -> "LinearSystem":
        """Normalize (possibly rational) rows and assemble a system."""
        variables = tuple(f"x{i + 1}" for i in range(n_original)) + tuple(aux)
        norm_rows = []
        for coeffs, rel, rhs in rows:
            rat = {k: parse_rational(v) for k, v in coeffs.items()}
            c, b = _scale_row(rat, parse_rational(rhs))
            if rel == ">=":  # store as given; scaling keeps the sense
                pass
            norm_rows.append((c, rel, b))
        bnd = {}
        for name, (lo, hi) in (bounds or {}).items():
            bnd[name] = (None if lo is None else parse_rational(lo),
                         None if hi is None else parse_rational(hi))
        return cls(variables, n_original, tuple(norm_rows), bnd, dict(meta or {}))

    @classmethod
    def from_hpolytope(cls, poly, meta: Mapping = None) -> "LinearSystem":
        """Wrap an H-description as a system over x1..xn (rows scaled to ints)."""
        rows = []
        for a, rel, b in poly.rows:
            coeffs = {f"x{i + 1}": v for i, v in enumerate(a) if v}
            rows.append((coeffs, rel, b))
        return cls.build(poly.n, (), rows, {}, meta or {"method": "hrep"})

    # -- accessors -------------------------------------------------------------

    @property
    def original_variables(self) -> tuple:
        return self.variables[: self.n_original]

    def bound(self, name: str) -> Bound:
        return self.bounds.get(name, (None, None))

    def counted_inequalities(self) -> int:
        """Inequality count in the extension-complexity convention."""
        count = sum(1 for _, rel, _ in self.rows if rel != "=")
        for name in self.variables:
            lo, hi = self.bound(name)
            if lo is not None and lo == hi:
                continue  # fixing == equality
            count += (lo is not None) + (hi is not None)
        return count

    def certified_bound(self) -> Optional[int]:
        return self.meta.get("certified")

    def with_bounds(self, overrides: Mapping[str, Bound]) -> "LinearSystem":
        """New system with per-variable bounds intersected with `overrides`."""
        bnd = dict(self.bounds)
        for name, (lo, hi) in overrides.items():
            if name not in self.variables:
                raise DomainError(f"bound on undeclared variable {name!r}")
            cur_lo, cur_hi = bnd.get(name, (None, None))
            new_lo = cur_lo if lo is None else (lo if cur_lo is None else max(lo, cur_lo))
            new_hi = cur_hi if hi is None else (hi if cur_hi is None else min(hi, cur_hi))
            bnd[name] = (new_lo, new_hi)
        return LinearSystem(self.variables, self.n_original, self.rows, bnd, self.meta)

    def with_meta(self, meta: Mapping) -> "LinearSystem":
        return LinearSystem(self.variables, self.n_original, self.rows,
                            self.bounds, dict(meta))

    def describe(self) -> str:
        return (f"LinearSystem({len(self.variables)} vars / {self.n_original} original, "
                f"{len(self.rows)} rows, {self.counted_inequalities()} counted inequalities)")
