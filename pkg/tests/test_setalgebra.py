import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sumprod.exactnum import GaussianRational, RMatrix, RQuaternion
from sumprod.setalgebra import (
    ElementSet,
    NonInvertibleElement,
    cauchy_schwarz_check,
    energy,
    hexadecant_partition,
    productset,
    ratio_profile,
    same_hexadecant,
    set_from_json,
    set_to_json,
    sign_pattern,
    sumset,
)

Q = RQuaternion.of


def reals(*vals):
    return ElementSet.of([Q(Fraction(v)) for v in vals])


def rand_quat(rng, span=20, den=6, positive=False):
    def coord():
        n = rng.randint(0 if positive else -span, span)
        return Fraction(n, rng.randint(1, den))
    q = RQuaternion(coord(), coord(), coord(), coord())
    return q


def rand_quat_set(rng, n, positive=False):
    out = {}
    while len(out) < n:
        q = rand_quat(rng, positive=positive)
        if not q.is_zero():
            out[q] = None
    return ElementSet.of(out)


def rand_matrix_set(rng, n, k=2):
    out = {}
    while len(out) < n:
        m = RMatrix.from_rows([
            [GaussianRational(Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
                              Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
             for _ in range(k)] for _ in range(k)
        ])
        from sumprod.exactnum import matrix_det
        if not matrix_det(m).is_zero():
            out[m] = None
    return ElementSet.of(out)


class TestSumset:
    def test_arithmetic_progression(self):
        assert {q.w for q in sumset(reals(1, 2, 3))} == {2, 3, 4, 5, 6}

    def test_quaternion_units(self):
        A = ElementSet.of([Q(1), Q(0, 1), Q(0, 0, 1)])
        s = sumset(A)
        # oracle: all 6 unordered pairwise sums, checked pairwise distinct
        expected = {Q(2), Q(1, 1), Q(1, 0, 1), Q(0, 2), Q(0, 1, 1), Q(0, 0, 2)}
        assert set(s.elements) == expected
        assert len(s) == 6

    def test_chang_like_unitriangular(self):
        mats = [
            RMatrix.from_rationals([[1, Fraction(i, 3)], [0, 1]])
            for i in (1, 2, 3)
        ]
        A = ElementSet.of(mats)
        assert len(sumset(A)) == 5
        assert len(productset(A)) == 5

    @given(st.lists(st.integers(min_value=-30, max_value=30),
                    min_size=1, max_size=8, unique=True))
    def test_permutation_invariance(self, vals):
        A = reals(*vals)
        B = ElementSet.of(list(reversed([Q(v) for v in vals])))
        assert sumset(A).elements == sumset(B).elements
        assert productset(A).elements == productset(B).elements


class TestProductset:
    def test_small_reals(self):
        got = {q.w for q in productset(reals(1, 2, 3))}
        assert got == {1, 2, 3, 4, 6, 9}

    def test_noncommutative_units(self):
        A = ElementSet.of([Q(0, 1), Q(0, 0, 1)])  # {i, j}
        got = set(productset(A).elements)
        assert got == {Q(-1), Q(0, 0, 0, 1), Q(0, 0, 0, -1)}  # {-1, k, -k}

    def test_growth_floor(self):
        rng = random.Random(5)
        for _ in range(10):
            A = rand_quat_set(rng, 6)
            assert max(len(sumset(A)), len(productset(A))) >= len(A)


class TestRatioProfile:
    def test_reals_1_2_4(self):
        prof = ratio_profile(reals(1, 2, 4))
        got = {x.w: lr for x, lr in prof.entries.items()}
        assert got == {
            Fraction(1): (3, 3),
            Fraction(2): (2, 2),
            Fraction(1, 2): (2, 2),
            Fraction(4): (1, 1),
            Fraction(1, 4): (1, 1),
        }

    def test_singleton(self):
        prof = ratio_profile(ElementSet.of([Q(2, 1, 0, 3)]))
        assert list(prof.entries.values()) == [(1, 1)]
        (x,) = prof.entries.keys()
        assert x == Q(1)

    def test_i_j_ratioset(self):
        prof = ratio_profile(ElementSet.of([Q(0, 1), Q(0, 0, 1)]))
        got = {x: lr for x, lr in prof.entries.items()}
        assert got == {Q(1): (2, 2), Q(0, 0, 0, 1): (1, 1), Q(0, 0, 0, -1): (1, 1)}

    def test_pair_sums_cover_all_pairs(self):
        rng = random.Random(17)
        for _ in range(10):
            A = rand_quat_set(rng, 7)
            prof = ratio_profile(A)
            n = len(A)
            assert sum(prof.left_counts.values()) == n * n
            assert sum(prof.right_counts.values()) == n * n
            assert all(l >= 1 and r >= 1 for l, r in prof.entries.values())

    def test_zero_rejected(self):
        with pytest.raises(NonInvertibleElement):
            ratio_profile(ElementSet.of([Q(0), Q(1)]))


class TestEnergy:
    def test_reals_1_2_4(self):
        A = reals(1, 2, 4)
        assert energy(A, "brute").value == 19
        assert energy(A, "fast").value == 19

    def test_singleton(self):
        A = ElementSet.of([Q(3, 1, 4, 1)])
        assert energy(A, "fast").value == 1
        assert energy(A, "brute").value == 1

    def test_all_ratios_distinct_gives_floor(self):
        # generic random quaternions: only diagonal quadruples match
        rng = random.Random(23)
        A = rand_quat_set(rng, 6)
        prof = ratio_profile(A)
        if all(l == 1 for x, (l, r) in prof.entries.items() if x != Q(1)):
            assert energy(A, "fast").value == len(A) ** 2

    @pytest.mark.parametrize("n", [2, 5, 9, 14, 25])
    def test_fast_equals_brute_quaternions(self, n):
        rng = random.Random(1000 + n)
        A = rand_quat_set(rng, n)
        assert energy(A, "fast").value == energy(A, "brute").value

    @pytest.mark.parametrize("n", [2, 5, 8, 12])
    def test_fast_equals_brute_matrices(self, n):
        rng = random.Random(2000 + n)
        A = rand_matrix_set(rng, n)
        assert energy(A, "fast").value == energy(A, "brute").value

    def test_energy_bounds(self):
        rng = random.Random(31)
        for _ in range(10):
            A = rand_quat_set(rng, 5)
            e = energy(A, "fast").value
            assert len(A) ** 2 <= e <= len(A) ** 3


class TestCauchySchwarz:
    def test_reals_1_2_4(self):
        e, bound, holds = cauchy_schwarz_check(reals(1, 2, 4))
        assert e == 19
        assert bound == Fraction(81, 5)  # |AA({1,2,4})| = 5
        assert holds

    def test_singleton(self):
        e, bound, holds = cauchy_schwarz_check(ElementSet.of([Q(7)]))
        assert e == 1 and bound == 1 and holds

    def test_random_sets(self):
        rng = random.Random(47)
        for _ in range(50):
            A = rand_quat_set(rng, 5)
            e, bound, holds = cauchy_schwarz_check(A)
            assert holds
            assert energy(A, "brute").value == e


class TestHexadecants:
    def test_simple_split(self):
        A = reals(1, 2, -1)
        classes = hexadecant_partition(A)
        assert [len(c) for c in classes] == [2, 1]
        assert {q.w for q in classes[0]} == {1, 2}
        assert sign_pattern(classes[1].elements[0]) == "-+++"

    def test_all_sixteen_patterns(self):
        qs = []
        for mask in range(16):
            coords = [Fraction(1) if mask & (1 << b) else Fraction(-1)
                      for b in range(4)]
            qs.append(RQuaternion(*coords))
        classes = hexadecant_partition(ElementSet.of(qs))
        assert len(classes) == 16
        assert all(len(c) == 1 for c in classes)

    def test_zero_excluded(self):
        A = ElementSet.of([Q(0), Q(1), Q(-2)])
        classes = hexadecant_partition(A)
        assert sum(len(c) for c in classes) == 2

    def test_largest_class_pigeonhole(self):
        rng = random.Random(53)
        for _ in range(20):
            A = rand_quat_set(rng, 17)
            classes = hexadecant_partition(A)
            assert 16 * len(classes[0]) >= len(A)

    def test_same_hexadecant_predicate(self):
        assert same_hexadecant(Q(1, 0, 2, 0), Q(3, 0, 0, 0))
        assert not same_hexadecant(Q(1, -1), Q(1, 1))

    def test_real_embedded_sumset_growth(self):
        # distinct positive reals in one hexadecant: |A+A| >= 2|A| - 1
        rng = random.Random(59)
        for _ in range(20):
            vals = rng.sample(range(1, 200), rng.randint(2, 12))
            A = reals(*vals)
            assert len(sumset(A)) >= 2 * len(A) - 1


class TestSerialization:
    def test_quaternion_roundtrip(self):
        rng = random.Random(61)
        A = rand_quat_set(rng, 6)
        assert set_from_json(set_to_json(A)) == A

    def test_matrix_roundtrip(self):
        rng = random.Random(67)
        A = rand_matrix_set(rng, 4)
        data = set_to_json(A)
        assert data["kind"] == "matrix" and data["k"] == 2
        assert set_from_json(data) == A
