import random
from fractions import Fraction

import pytest

from fvx import (
    BinaryPoint,
    CubeFace,
    HPolytope,
    LatticeBox,
    LatticePoint,
    Objective,
    cube_hrep,
    format_rational,
    hamming_independent,
    no_good_cut,
    parse_rational,
    sigma_decode,
    sigma_encode,
)
from fvx.errors import DomainError


class TestRational:
    def test_parse_forms(self):
        assert parse_rational("3/4") == Fraction(3, 4)
        assert parse_rational("5") == Fraction(5)
        assert parse_rational("-7/2") == Fraction(-7, 2)
        assert parse_rational(4) == Fraction(4)

    def test_parse_rejects_garbage(self):
        with pytest.raises(DomainError):
            parse_rational("abc")
        with pytest.raises(DomainError):
            parse_rational("1/0")
        with pytest.raises(DomainError):
            parse_rational(0.5)

    def test_format_round_trip(self):
        for text in ("3/4", "-2", "0", "17/3"):
            assert format_rational(parse_rational(text)) == text


class TestSigma:
    def test_encode_examples(self):
        assert sigma_encode(BinaryPoint.from_coords((0, 0, 0))) == 0
        assert sigma_encode(BinaryPoint.from_coords((1, 0, 1))) == 5
        assert sigma_encode(BinaryPoint.from_coords((1, 1))) == 3

    def test_decode_examples(self):
        assert sigma_decode(0, 3).coords() == (0, 0, 0)
        assert sigma_decode(6, 3).coords() == (0, 1, 1)
        with pytest.raises(DomainError):
            sigma_decode(8, 3)

    def test_round_trip_exhaustive(self):
        for n in range(1, 17):
            for k in range(1 << n):
                assert sigma_encode(sigma_decode(k, n)) == k

    def test_monotone_in_lex_from_last(self):
        # sorting by code equals sorting by reversed-coordinate tuples
        for n in (1, 2, 3, 5, 7):
            pts = [BinaryPoint(n, b) for b in range(1 << n)]
            by_code = sorted(pts, key=sigma_encode)
            by_rev = sorted(pts, key=lambda p: tuple(reversed(p.coords())))
            assert by_code == by_rev


class TestBinaryPoint:
    def test_string_round_trip(self):
        p = BinaryPoint.from_string("0110")
        assert p.coords() == (0, 1, 1, 0)
        assert p.to_string() == "0110"
        assert p.coord(2) == 1

    def test_validation(self):
        with pytest.raises(DomainError):
            BinaryPoint(0, 0)
        with pytest.raises(DomainError):
            BinaryPoint(2, 4)
        with pytest.raises(DomainError):
            BinaryPoint(65, 0)
        with pytest.raises(DomainError):
            BinaryPoint.from_string("012")

    def test_hamming_flip_prefix(self):
        p = BinaryPoint.from_string("101")
        q = BinaryPoint.from_string("001")
        assert p.hamming(q) == 1
        assert p.flip(1) == q
        assert p.prefix(2).coords() == (1, 0)


class TestHammingIndependent:
    def test_examples(self):
        mk = BinaryPoint.from_coords
        assert hamming_independent({mk((0, 0)), mk((1, 1))})
        assert not hamming_independent({mk((0, 0)), mk((0, 1))})
        assert hamming_independent({mk((0, 1, 0))})
        assert hamming_independent(set())

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            hamming_independent({BinaryPoint(2, 0), BinaryPoint(3, 0)})


class TestNoGoodCut:
    def test_examples(self):
        assert no_good_cut(BinaryPoint.from_coords((0, 0, 0))) == ((1, 1, 1), ">=", 1)
        assert no_good_cut(BinaryPoint.from_coords((1, 1))) == ((-1, -1), ">=", -1)
        assert no_good_cut(BinaryPoint.from_coords((1, 0))) == ((-1, 1), ">=", 0)

    def test_separates_exactly_v_exhaustively(self):
        # satisfied by every other binary point, violated by v, up to n = 10
        for n in range(1, 11):
            for vbits in range(1 << n):
                coeffs, rel, rhs = no_good_cut(BinaryPoint(n, vbits))
                assert rel == ">="
                mask_pos = ~vbits & ((1 << n) - 1)
                for ubits in range(1 << n):
                    lhs = (ubits & mask_pos).bit_count() - (ubits & vbits).bit_count()
                    assert (lhs >= rhs) == (ubits != vbits)

    def test_independent_set_cuts_cube(self):
        # cube + cuts keeps exactly the complement (small seeded version;
        # the acceptance suite runs the full n <= 6 check)
        rng = random.Random(5)
        for n in (2, 3, 4):
            for _ in range(20):
                X = []
                for b in rng.sample(range(1 << n), rng.randint(1, 1 << (n - 1))):
                    cand = BinaryPoint(n, b)
                    if hamming_independent(X + [cand]):
                        X.append(cand)
                cuts = [no_good_cut(v) for v in X]
                forbidden = {v.bits for v in X}
                for ubits in range(1 << n):
                    u = BinaryPoint(n, ubits).coords()
                    ok = all(sum(a * x for a, x in zip(c, u)) >= r for c, _, r in cuts)
                    assert ok == (ubits not in forbidden)


class TestCubeFace:
    def test_basic(self):
        face = CubeFace.of(3, {1: 1, 3: 0})
        assert face.fixed_map == {1: 1, 3: 0}
        assert not face.is_improper
        assert face.contains(BinaryPoint.from_string("110"))
        assert not face.contains(BinaryPoint.from_string("011"))
        assert sorted(p.to_string() for p in face.vertices()) == ["100", "110"]

    def test_improper(self):
        face = CubeFace.improper(2)
        assert face.is_improper
        assert len(list(face.vertices())) == 4

    def test_validation(self):
        with pytest.raises(DomainError):
            CubeFace.of(2, {3: 1})
        with pytest.raises(DomainError):
            CubeFace.of(2, {1: 2})
        with pytest.raises(DomainError):
            CubeFace(2, ((1, 0), (1, 1)))


class TestLatticeBox:
    def test_contains_count_iter(self):
        box = LatticeBox.of((0, -1), (2, 1))
        assert box.lattice_count() == 9
        assert box.contains(LatticePoint.from_coords((1, 0)))
        assert not box.contains(LatticePoint.from_coords((3, 0)))
        pts = list(box.iter_points())
        assert len(pts) == 9
        assert pts == sorted(pts, key=lambda p: p.coords)

    def test_intersect(self):
        a = LatticeBox.of((0, 0), (2, 2))
        b = LatticeBox.of((1, -5), (4, 0))
        c = a.intersect(b)
        assert (c.l.coords, c.u.coords) == ((1, 0), (2, 0))
        assert a.intersect(LatticeBox.of((3, 3), (4, 4))) is None

    def test_validation(self):
        with pytest.raises(DomainError):
            LatticeBox.of((1,), (0,))


class TestHPolytope:
    def test_satisfies_and_cube(self):
        cube = cube_hrep(2)
        assert len(cube.rows) == 4
        assert cube.satisfies(BinaryPoint.from_string("10"))
        tri = HPolytope.of(2, [((1, 1), "<=", 1), ((1, 0), ">=", 0), ((0, 1), ">=", 0)])
        assert tri.satisfies(BinaryPoint.from_string("01"))
        assert not tri.satisfies(BinaryPoint.from_string("11"))

    def test_validation(self):
        with pytest.raises(DomainError):
            HPolytope.of(2, [((1,), "<=", 1)])
        with pytest.raises(DomainError):
            HPolytope.of(1, [((1,), "<", 1)])


class TestObjective:
    def test_dot(self):
        c = Objective.of(["1/2", "-3", "2"])
        assert c.dot(BinaryPoint.from_string("101")) == Fraction(5, 2)
        assert c.dot(LatticePoint.from_coords((2, 1, 0))) == Fraction(-2)

    def test_validation(self):
        with pytest.raises(DomainError):
            Objective(2, (Fraction(1),))
        with pytest.raises(DomainError):
            Objective.of(["1"]).dot(BinaryPoint.from_string("11"))
