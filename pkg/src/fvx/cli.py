"""Command-line interface: solve, kbest, alldiff, compile, verify, enumerate.

Problem files are JSON documents (see README for the schema).  All numeric
output is exact ("p/q" strings); every command is deterministic given the
file, flags, and seed.  Exit codes: 0 success / verification pass, 1 usage or
input error, 2 infeasible, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    BinaryPoint,
    HPolytope,
    LatticeBox,
    LatticePoint,
    Objective,
    cube_hrep,
    format_rational,
    parse_rational,
)
from .errors import FvxError, GuardExceeded, IncompatibleMethod
from .extension import (
    face_formulation,
    facet_intersection_formulation,
    interval_formulation,
    recursive_formulation,
)
from .integral import forbI_formulation, solve_forbidden_integral, kbest_integral
from .lp_format import parse_lp, write_lp
from .oracles import (
    CountingOracle,
    cardinality_oracle,
    cube_oracle,
    hrep_binary_oracle,
    lattice_box_oracle,
    spanning_tree_oracle,
)
from .separation import kbest, solve_forbidden
from .verify import ENUM_GUARD_DIM, ENUM_GUARD_POINTS, verify_formulation

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_VERIFY_FAILED = 3

BINARY_METHODS = ("interval", "recursive", "faces", "facet-intersection")
ALL_METHODS = BINARY_METHODS + ("boxes",)


class InputError(FvxError):
    """Problem-file validation failure; the message names the field."""


def _fail(field: str, message: str):
    raise InputError(f"field '{field}': {message}")


def _require(doc: dict, field: str):
    if field not in doc:
        raise InputError(f"missing field '{field}'")
    return doc[field]


def _parse_hrep(n: int, spec: dict, field: str) -> HPolytope:
    rows_doc = spec.get("rows")
    if not isinstance(rows_doc, list) or not rows_doc:
        _fail(f"{field}.rows", "expected a nonempty list of rows")
    rows = []
    for i, row in enumerate(rows_doc):
        if not isinstance(row, dict):
            _fail(f"{field}.rows[{i}]", "expected an object with 'a', 'rel', 'b'")
        a = row.get("a")
        if not isinstance(a, list) or len(a) != n:
            _fail(f"{field}.rows[{i}].a", f"expected {n} coefficients")
        rel = row.get("rel")
        if rel not in ("<=", "=", ">="):
            _fail(f"{field}.rows[{i}].rel", "expected one of '<=', '=', '>='")
        try:
            coeffs = tuple(parse_rational(v) for v in a)
            rhs = parse_rational(row.get("b"))
        except FvxError as exc:
            _fail(f"{field}.rows[{i}]", str(exc))
        rows.append((coeffs, rel, rhs))
    return HPolytope(n, tuple(rows))


class Problem:
    """A validated problem file."""

    def __init__(self, doc: dict):
        if not isinstance(doc, dict):
            raise InputError("problem file must be a JSON object")
        self.kind = _require(doc, "kind")
        if self.kind not in ("binary", "integral"):
            _fail("kind", "expected 'binary' or 'integral'")
        self.n = _require(doc, "n")
        if not isinstance(self.n, int) or self.n < 1:
            _fail("n", "expected a positive integer")
        self.doc = doc
        self.slots = doc.get("slots")
        if self.slots is not None:
            if not isinstance(self.slots, list) or not self.slots:
                _fail("slots", "expected a nonempty list")
            for i, slot in enumerate(self.slots):
                if not isinstance(slot, dict) or "polytope" not in slot:
                    _fail(f"slots[{i}]", "expected an object with 'polytope'")
        self.polytope = doc.get("polytope")
        if self.slots is None and self.polytope is None:
            raise InputError("missing field 'polytope'")
        self.objective = None
        if "objective" in doc:
            self.objective = self._parse_objective(doc["objective"], "objective")
        self.forbidden = self._parse_forbidden(doc.get("forbidden", []))
        self.ambient = self._parse_ambient(doc.get("ambient"))
        self.k = doc.get("k")
        if self.k is not None and (not isinstance(self.k, int) or self.k < 1):
            _fail("k", "expected a positive integer")

    def _parse_objective(self, raw, field: str) -> Objective:
        if not isinstance(raw, list) or len(raw) != self.n:
            _fail(field, f"expected {self.n} rational entries")
        try:
            return Objective.of([parse_rational(v) for v in raw])
        except FvxError as exc:
            _fail(field, str(exc))

    def _parse_forbidden(self, raw) -> list:
        if not isinstance(raw, list):
            _fail("forbidden", "expected a list")
        out = []
        for i, item in enumerate(raw):
            if self.kind == "binary":
                if not isinstance(item, str) or len(item) != self.n \
                        or any(ch not in "01" for ch in item):
                    _fail(f"forbidden[{i}]", f"expected a bitstring of length {self.n}")
                out.append(BinaryPoint.from_string(item))
            else:
                if not isinstance(item, list) or len(item) != self.n \
                        or any(not isinstance(v, int) for v in item):
                    _fail(f"forbidden[{i}]", f"expected {self.n} integers")
                out.append(LatticePoint.from_coords(item))
        return out

    def _parse_ambient(self, raw) -> Optional[LatticeBox]:
        if raw is None:
            if self.kind == "integral" and self.polytope \
                    and self.polytope.get("type") == "lattice-box":
                return self._box_of(self.polytope, "polytope")
            return None
        if not isinstance(raw, dict):
            _fail("ambient", "expected an object with 'l' and 'u'")
        return self._box_of(raw, "ambient")

    def _box_of(self, spec: dict, field: str) -> LatticeBox:
        l = spec.get("l")
        u = spec.get("u")
        for name, arr in (("l", l), ("u", u)):
            if not isinstance(arr, list) or len(arr) != self.n \
                    or any(not isinstance(v, int) for v in arr):
                _fail(f"{field}.{name}", f"expected {self.n} integers")
        try:
            return LatticeBox.of(l, u)
        except FvxError as exc:
            _fail(field, str(exc))

    # -- oracle / polytope assembly -------------------------------------------

    def binary_oracle(self, polytope: Optional[dict] = None):
        spec = polytope if polytope is not None else self.polytope
        ptype = spec.get("type")
        if ptype == "cube":
            return cube_oracle(self.n)
        if ptype == "cardinality":
            s = spec.get("s")
            if not isinstance(s, int):
                _fail("polytope.s", "expected an integer")
            return cardinality_oracle(self.n, s)
        if ptype == "spanning-tree":
            nodes = spec.get("nodes")
            edges = spec.get("edges")
            if not isinstance(nodes, int) or nodes < 1:
                _fail("polytope.nodes", "expected a positive integer")
            if not isinstance(edges, list) or len(edges) != self.n:
                _fail("polytope.edges", f"expected {self.n} edges (the dimension)")
            return spanning_tree_oracle(nodes, [tuple(e) for e in edges])
        if ptype == "hrep":
            return hrep_binary_oracle(_parse_hrep(self.n, spec, "polytope"))
        _fail("polytope.type", f"unsupported binary polytope type {ptype!r}")

    def integral_oracle(self, polytope: Optional[dict] = None):
        spec = polytope if polytope is not None else self.polytope
        ptype = spec.get("type")
        if ptype == "lattice-box":
            box = self._box_of(spec, "polytope")
            return lattice_box_oracle(box.l.coords, box.u.coords)
        _fail("polytope.type",
              f"integral solving supports 'lattice-box', got {ptype!r}")

    def oracle(self, polytope: Optional[dict] = None):
        if self.kind == "binary":
            return self.binary_oracle(polytope)
        return self.integral_oracle(polytope)

    def hpolytope(self) -> HPolytope:
        ptype = self.polytope.get("type")
        if ptype == "cube":
            return cube_hrep(self.n)
        if ptype == "cardinality":
            s = self.polytope.get("s")
            if not isinstance(s, int):
                _fail("polytope.s", "expected an integer")
            rows = list(cube_hrep(self.n).rows)
            rows.append((tuple(Fraction(1) for _ in range(self.n)), "=", Fraction(s)))
            return HPolytope(self.n, tuple(rows))
        if ptype == "hrep":
            return _parse_hrep(self.n, self.polytope, "polytope")
        if ptype == "lattice-box":
            box = self._box_of(self.polytope, "polytope")
            rows = []
            for i in range(self.n):
                a = tuple(Fraction(1 if j == i else 0) for j in range(self.n))
                rows.append((a, ">=", Fraction(box.l.coords[i])))
                rows.append((a, "<=", Fraction(box.u.coords[i])))
            return HPolytope(self.n, tuple(rows))
        raise IncompatibleMethod(
            f"polytope type {ptype!r} has no explicit H-description")

    # -- ground truth -----------------------------------------------------------

    def enumerate_allowed(self) -> list:
        """All allowed vertices (sorted lexicographically); guarded."""
        if self.kind == "binary":
            if self.n > ENUM_GUARD_DIM:
                raise GuardExceeded(
                    f"dimension {self.n} exceeds the enumeration guard {ENUM_GUARD_DIM}")
            forbidden = {p.bits for p in self.forbidden}
            out = []
            for bits in range(1 << self.n):
                if bits in forbidden:
                    continue
                p = BinaryPoint(self.n, bits)
                if self._binary_member(p):
                    out.append(p)
            return sorted(out, key=lambda p: p.coords())
        if self.ambient is None:
            _fail("ambient", "required to enumerate an integral problem")
        if self.ambient.lattice_count() > ENUM_GUARD_POINTS:
            raise GuardExceeded(
                f"{self.ambient.lattice_count()} lattice points exceed the "
                f"guard {ENUM_GUARD_POINTS}")
        forbidden = {p.coords for p in self.forbidden}
        out = []
        for p in self.ambient.iter_points():
            if p.coords in forbidden:
                continue
            if self._integral_member(p):
                out.append(p)
        return sorted(out, key=lambda p: p.coords)

    def _binary_member(self, p: BinaryPoint) -> bool:
        ptype = self.polytope.get("type")
        if ptype == "cube":
            return True
        if ptype == "cardinality":
            return p.bits.bit_count() == self.polytope.get("s")
        if ptype == "hrep":
            return self._cached_hrep().satisfies(p)
        if ptype == "spanning-tree":
            return self._is_spanning_tree(p)
        _fail("polytope.type", f"unsupported binary polytope type {ptype!r}")

    def _integral_member(self, p: LatticePoint) -> bool:
        ptype = self.polytope.get("type")
        if ptype == "lattice-box":
            return self._box_of(self.polytope, "polytope").contains(p)
        if ptype == "hrep":
            return self._cached_hrep().satisfies(p)
        _fail("polytope.type", f"unsupported integral polytope type {ptype!r}")

    def _cached_hrep(self) -> HPolytope:
        if not hasattr(self, "_hrep_cache"):
            self._hrep_cache = _parse_hrep(self.n, self.polytope, "polytope")
        return self._hrep_cache

    def _is_spanning_tree(self, p: BinaryPoint) -> bool:
        nodes = self.polytope.get("nodes")
        edges = self.polytope.get("edges")
        if p.bits.bit_count() != nodes - 1:
            return False
        parent = list(range(nodes))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for e in range(self.n):
            if (p.bits >> e) & 1:
                u, v = edges[e]
                ru, rv = find(u), find(v)
                if ru == rv:
                    return False
                parent[ru] = rv
        return True


def load_problem(path: str) -> Problem:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    return Problem(doc)


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def _vertex_out(problem: Problem, vertex) -> object:
    if problem.kind == "binary":
        return vertex.to_string()
    return list(vertex.coords)


# -- commands -----------------------------------------------------------------

def cmd_solve(args) -> int:
    problem = load_problem(args.file)
    if problem.objective is None:
        raise InputError("missing field 'objective'")
    oracle = CountingOracle(problem.oracle())
    if problem.kind == "binary":
        outcome = solve_forbidden(oracle, problem.forbidden, problem.objective)
    else:
        if problem.ambient is None:
            _fail("ambient", "required for integral problems")
        outcome = solve_forbidden_integral(oracle, problem.forbidden,
                                           problem.ambient, problem.objective)
    if not outcome.feasible:
        _emit({"status": "infeasible", "oracle_calls": oracle.calls})
        return EXIT_INFEASIBLE
    _emit({"status": "optimal",
           "value": format_rational(outcome.value),
           "vertex": _vertex_out(problem, outcome.vertex),
           "oracle_calls": oracle.calls})
    return EXIT_OK


def cmd_kbest(args) -> int:
    problem = load_problem(args.file)
    if problem.objective is None:
        raise InputError("missing field 'objective'")
    k = args.k if args.k is not None else problem.k
    if k is None:
        raise InputError("missing 'k' (flag -k or file field)")
    oracle = CountingOracle(problem.oracle())
    if problem.kind == "binary":
        vertices, exhausted = kbest(oracle, problem.objective, k,
                                    exclude=problem.forbidden)
    else:
        if problem.ambient is None:
            _fail("ambient", "required for integral problems")
        vertices, exhausted = kbest_integral(oracle, problem.ambient,
                                             problem.objective, k,
                                             exclude=problem.forbidden)
    _emit({"status": "ok",
           "vertices": [_vertex_out(problem, v) for v in vertices],
           "values": [format_rational(problem.objective.dot(v)) for v in vertices],
           "exhausted": exhausted,
           "oracle_calls": oracle.calls})
    return EXIT_OK


def cmd_alldiff(args) -> int:
    from .alldiff import AlldiffInstance, solve_alldiff

    problem = load_problem(args.file)
    if problem.slots is None:
        raise InputError("missing field 'slots' (alldiff needs one entry per slot)")
    oracles = []
    objectives = []
    for i, slot in enumerate(problem.slots):
        oracles.append(problem.oracle(slot["polytope"]))
        if "objective" not in slot:
            _fail(f"slots[{i}].objective", "missing")
        objectives.append(problem._parse_objective(slot["objective"],
                                                   f"slots[{i}].objective"))
    instance = AlldiffInstance(tuple(oracles), tuple(objectives),
                               ambient=problem.ambient)
    result = solve_alldiff(instance)
    if not result.feasible:
        _emit({"status": "infeasible"})
        return EXIT_INFEASIBLE
    _emit({"status": "optimal",
           "assignment": [_vertex_out(problem, v) for v in result.assignment],
           "values": [format_rational(c.dot(v))
                      for c, v in zip(objectives, result.assignment)],
           "total": format_rational(result.total)})
    return EXIT_OK


def compile_system(problem: Problem, method: str):
    if method not in ALL_METHODS:
        raise IncompatibleMethod(f"unknown method {method!r}")
    if method == "boxes":
        if problem.kind != "integral":
            raise IncompatibleMethod("method 'boxes' requires kind 'integral'")
        if problem.ambient is None:
            _fail("ambient", "required for method 'boxes'")
        return forbI_formulation(problem.hpolytope(), problem.forbidden,
                                 problem.ambient)
    if problem.kind != "binary":
        raise IncompatibleMethod(f"method '{method}' requires kind 'binary'")
    if method in ("interval", "recursive"):
        if problem.polytope.get("type") != "cube":
            raise IncompatibleMethod(
                f"method '{method}' requires the cube ambient polytope")
        builder = interval_formulation if method == "interval" else recursive_formulation
        return builder(problem.forbidden, problem.n)
    poly = problem.hpolytope()
    if method == "faces":
        return face_formulation(poly, problem.forbidden)
    facets = problem.polytope.get("facets")
    if facets is None:
        facets = list(range(len(poly.rows)))
    return facet_intersection_formulation(poly, facets, problem.forbidden)


def cmd_compile(args) -> int:
    problem = load_problem(args.file)
    text = write_lp(compile_system(problem, args.method))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    problem = load_problem(args.file)
    if args.lp:
        try:
            with open(args.lp, "r", encoding="utf-8") as handle:
                system = parse_lp(handle.read())
        except OSError as exc:
            raise InputError(f"cannot read {args.lp}: {exc}") from exc
    elif args.method:
        system = compile_system(problem, args.method)
    else:
        raise InputError("need --lp FILE or --method NAME to know what to verify")
    truth = problem.enumerate_allowed()
    report = verify_formulation(system, truth, problem.forbidden,
                                trials=args.trials, seed=args.seed)
    _emit(report.to_dict())
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def cmd_enumerate(args) -> int:
    problem = load_problem(args.file)
    allowed = problem.enumerate_allowed()
    _emit({"status": "ok",
           "count": len(allowed),
           "vertices": [_vertex_out(problem, v) for v in allowed]})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fvx",
        description="Optimize over polytope vertices with forbidden points; "
                    "compile and verify extended formulations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="minimize the objective over allowed vertices")
    p.add_argument("file")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("kbest", help="enumerate the k best vertices")
    p.add_argument("file")
    p.add_argument("-k", type=int, default=None, help="how many vertices")
    p.set_defaults(func=cmd_kbest)

    p = sub.add_parser("alldiff", help="one distinct vertex per slot, min total")
    p.add_argument("file")
    p.set_defaults(func=cmd_alldiff)

    p = sub.add_parser("compile", help="emit an extended formulation as an LP file")
    p.add_argument("file")
    p.add_argument("--method", required=True, choices=ALL_METHODS)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("verify", help="check a formulation against ground truth")
    p.add_argument("file")
    p.add_argument("--lp", default=None, help="LP file to verify (else compile in-memory)")
    p.add_argument("--method", default=None, choices=ALL_METHODS)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", help="list all allowed vertices")
    p.add_argument("file")
    p.set_defaults(func=cmd_enumerate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FvxError as exc:
        _emit({"status": "error", "message": str(exc)})
        return EXIT_USAGE


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
