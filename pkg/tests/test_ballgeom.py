import random
from fractions import Fraction

import pytest

from sumprod.ballgeom import (
    AuditResult,
    Ball,
    CenterSeparationViolated,
    DegenerateAllCentersEqualP,
    audit_multiplicity,
    check_center_separation,
    construct_kissing,
    distsq,
    dot4,
    kissing_bound,
    matrix_ball,
    quaternion_ball,
)
from sumprod.exactnum import RMatrix, RQuaternion

Q = RQuaternion.of


def rand_quat(rng, span=10):
    return RQuaternion(*(Fraction(rng.randint(-span, span), rng.randint(1, 4))
                         for _ in range(4)))


class TestKissingBound:
    def test_quaternion(self):
        assert kissing_bound("quaternion") == 25

    def test_matrix_k1(self):
        # Hadwiger in the plane: 8 touching translates plus the central ball
        assert kissing_bound("matrix", 1) == 9

    def test_matrix_k2(self):
        assert kissing_bound("matrix", 2) == 3**8


class TestAudit:
    def test_disjoint_balls(self):
        balls = {
            Q(0): quaternion_ball(Q(0), Fraction(1)),
            Q(10): quaternion_ball(Q(10), Fraction(1)),
        }
        res = audit_multiplicity(balls, [(Q(Fraction(1, 2)), [Q(0)])], cap=25)
        assert res.max_multiplicity == 1
        assert not res.offenders and not res.owner_violations

    def test_boundary_point_counts_in_both(self):
        balls = {
            Q(0): quaternion_ball(Q(0), Fraction(1)),
            Q(2): quaternion_ball(Q(2), Fraction(1)),
        }
        res = audit_multiplicity(balls, [(Q(1), [Q(0), Q(2)])], cap=25)
        assert res.max_multiplicity == 2

    def test_center_separation_checked_first(self):
        balls = {
            Q(0): quaternion_ball(Q(0), Fraction(4)),
            Q(1): quaternion_ball(Q(1), Fraction(1)),
        }
        with pytest.raises(CenterSeparationViolated):
            audit_multiplicity(balls, [], cap=25)

    def test_owner_must_be_contained(self):
        balls = {
            Q(0): quaternion_ball(Q(0), Fraction(1)),
            Q(10): quaternion_ball(Q(10), Fraction(1)),
        }
        res = audit_multiplicity(balls, [(Q(Fraction(1, 2)), [Q(10)])], cap=25)
        assert res.owner_violations == [Q(Fraction(1, 2))]

    def test_nearest_neighbour_radii_respect_cap(self):
        rng = random.Random(71)
        for _ in range(10):
            centers = []
            while len(centers) < 12:
                q = rand_quat(rng)
                if q not in centers:
                    centers.append(q)
            balls = {}
            for c in centers:
                rsq = min(distsq(c, o) for o in centers if o != c)
                balls[c] = quaternion_ball(c, rsq)
            pts = [(c, []) for c in centers] + [(rand_quat(rng), []) for _ in range(10)]
            res = audit_multiplicity(balls, pts, cap=kissing_bound("quaternion"))
            assert res.max_multiplicity <= 25
            assert not res.offenders


class TestConstructKissing:
    def test_two_orthogonal_rays(self):
        P = Q(0)
        q1, q2 = Q(1), Q(0, 1)
        balls = [quaternion_ball(q1, Fraction(1)), quaternion_ball(q2, Fraction(1))]
        cfg = construct_kissing(P, [q1, q2], balls)
        assert cfg.radius_sq == 1
        assert cfg.sphere_count() == 2
        assert cfg.touching_ok and cfg.nonoverlap_ok

    def test_single_ray(self):
        P = Q(0)
        cfg = construct_kissing(P, [Q(2)], [quaternion_ball(Q(2), Fraction(4))])
        assert cfg.sphere_count() == 1
        assert cfg.touching_ok and cfg.nonoverlap_ok

    def test_interior_violation_rejected(self):
        P = Q(0)
        centers = [Q(Fraction(1, 10)), Q(2)]
        balls = [quaternion_ball(centers[0], Fraction(9)),
                 quaternion_ball(centers[1], Fraction(4))]
        with pytest.raises(CenterSeparationViolated):
            construct_kissing(P, centers, balls)

    def test_all_centers_equal_p(self):
        P = Q(1)
        with pytest.raises(DegenerateAllCentersEqualP):
            construct_kissing(P, [P], [quaternion_ball(P, Fraction(0))])

    def test_p_must_lie_in_every_ball(self):
        with pytest.raises(ValueError):
            construct_kissing(Q(0), [Q(5)], [quaternion_ball(Q(5), Fraction(1))])

    def test_rescaled_center_contrapositive(self):
        # if the rescaled spheres overlap, the original centers were closer
        # than the larger center distance (the chain inside the lemma proof)
        rng = random.Random(73)
        P = Q(0)
        checked = 0
        for _ in range(300):
            qi, qj = rand_quat(rng, span=6), rand_quat(rng, span=6)
            if qi.is_zero() or qj.is_zero() or qi == qj:
                continue
            li, lj = distsq(qi, P), distsq(qj, P)
            d = dot4(qi - P, qj - P)
            overlap = d > 0 and 4 * d * d > li * lj  # dist(C_i,C_j) < r
            if overlap:
                checked += 1
                assert distsq(qi, qj) < max(li, lj)
        assert checked > 10


class TestMatrixBalls:
    def mat(self, *vals):
        return RMatrix.from_rationals([[vals[0], vals[1]], [vals[2], vals[3]]])

    def test_contains_center(self):
        c = self.mat(1, 0, 0, 1)
        ball = matrix_ball(c, self.mat(Fraction(1, 2), 0, 0, 0))
        assert ball.contains(c)

    def test_membership_boundary(self):
        c = self.mat(0, 0, 0, 0)
        ball = matrix_ball(c, self.mat(1, 0, 0, 1))  # radius 1
        inside = self.mat(Fraction(1, 2), 0, 0, 0)
        outside = self.mat(3, 0, 0, 0)
        assert ball.contains(inside)
        assert not ball.contains(outside)

    def test_construct_matrix_config(self):
        P = self.mat(0, 0, 0, 0)
        q1 = self.mat(1, 0, 0, 0)
        q2 = self.mat(0, 0, 0, 1)
        balls = [matrix_ball(q1, self.mat(1, 0, 0, 1)),
                 matrix_ball(q2, self.mat(1, 0, 0, 1))]
        cfg = construct_kissing(P, [q1, q2], balls)
        assert cfg.sphere_count() == 2
        assert cfg.touching_ok and cfg.nonoverlap_ok
        assert cfg.radius_iv.contains(1)
