"""Separating faces of the cube and the forbidden-vertices solver.

Given a forbidden set X of binary points, a family of cube faces is
X-separating when the binary points of its faces union to exactly
{0,1}^n \\ X.  The constructive family used here fixes, for each prefix
level i, the prefixes that leave X: it has at most n|X| members, and one
face-restricted oracle call per member solves linear optimization over
V(P) \\ X.  Repeating that solve with a growing forbidden list yields the
k-best enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Set, Tuple

from .core import BinaryPoint, CubeFace, Objective
from .errors import DomainError
from .oracles import BinaryOracle, OracleOutcome, INFEASIBLE


def _bits_set(X: Iterable[BinaryPoint], n: int) -> Set[int]:
    out = set()
    for p in X:
        if p.n != n:
            raise DomainError(f"point of dimension {p.n} in dimension-{n} problem")
        out.add(p.bits)
    return out


@dataclass(frozen=True)
class PrefixSets:
    """Per-level projections X^i and their complements-within-extension.

    `projections[i-1]` is X^i, the projection of X onto the first i
    coordinates; `flips[i-1]` is (X^{i-1} x {0,1}) \\ X^i, the level-i
    prefixes that leave X.  Both are stored as i-bit integer codes.
    The complement of X is the disjoint union of flips[i-1] x {0,1}^{n-i}.
    """

    n: int
    projections: tuple
    flips: tuple


def prefix_sets(X: Iterable[BinaryPoint], n: int) -> PrefixSets:
    bits = _bits_set(X, n)
    projections = []
    flips = []
    prev = {0} if bits else set()  # X^0 = {empty prefix} for nonempty X
    for i in range(1, n + 1):
        mask = (1 << i) - 1
        proj = {b & mask for b in bits}
        if i == 1:
            level = {0, 1} - proj
        else:
            level = {p | (bit << (i - 1)) for p in prev for bit in (0, 1)} - proj
        projections.append(frozenset(proj))
        flips.append(frozenset(level))
        prev = proj
    return PrefixSets(n, tuple(projections), tuple(flips))


@dataclass(frozen=True)
class SeparatingFamily:
    """An X-separating list of cube faces with its source set."""

    n: int
    faces: tuple
    source: frozenset  # codes of X

    def __len__(self) -> int:
        return len(self.faces)


def separating_faces(X: Iterable[BinaryPoint], n: int) -> SeparatingFamily:
    """The constructive X-separating family (at most n|X| faces).

    Level-i members fix coordinates 1..i to a prefix that has left X; the
    conventions are: X empty gives the single improper face, X = {0,1}^n
    gives the empty family.
    """
    bits = _bits_set(X, n)
    if not bits:
        return SeparatingFamily(n, (CubeFace.improper(n),), frozenset())
    faces: List[CubeFace] = []
    levels = prefix_sets((BinaryPoint(n, b) for b in bits), n)
    for i in range(1, n + 1):
        for w in sorted(levels.flips[i - 1]):
            fixings = {j: (w >> (j - 1)) & 1 for j in range(1, i + 1)}
            faces.append(CubeFace.of(n, fixings))
    return SeparatingFamily(n, tuple(faces), frozenset(bits))


def solve_forbidden(oracle: BinaryOracle, X: Iterable[BinaryPoint],
                    c: Objective) -> OracleOutcome:
    """Minimize c over V(P) \\ X via one oracle query per separating face.

    Infeasible exactly when V(P) \\ X is empty; value ties across faces are
    broken toward the lexicographically smallest vertex.
    """
    n = oracle.n
    if c.n != n:
        raise DomainError("objective dimension mismatch")
    family = separating_faces(X, n)
    best: Optional[OracleOutcome] = None
    best_key = None
    for face in family.faces:
        outcome = oracle.minimize(c, face)
        if not outcome.feasible:
            continue
        key = (outcome.value, outcome.vertex.coords())
        if best_key is None or key < best_key:
            best, best_key = outcome, key
    return best if best is not None else INFEASIBLE


def kbest(oracle: BinaryOracle, c: Objective, k: int,
          exclude: Iterable = ()) -> Tuple[list, bool]:
    """First k vertices of P in nondecreasing objective order.

    Returns (vertices, exhausted): vertices are distinct, their values are
    nondecreasing, and the worst returned value is at most the value of any
    vertex not returned.  `exhausted` is True exactly when the solve after
    the last returned vertex proved no further vertex exists.  Vertices in
    `exclude` are treated as already removed and never returned.
    """
    if k < 1:
        raise DomainError(f"k must be positive, got {k}")
    removed: List[BinaryPoint] = list(exclude)
    found: List[BinaryPoint] = []
    for _ in range(k):
        outcome = solve_forbidden(oracle, removed + found, c)
        if not outcome.feasible:
            return found, True
        found.append(outcome.vertex)
    return found, False
