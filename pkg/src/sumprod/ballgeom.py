"""Ball-overlap geometry behind the witness-counting step.

Quaternions live in R^4 with the Euclidean norm, so every predicate here is
an exact comparison of squared rational distances.  Matrices live in C^(k*k)
under the operator 1-norm; distances are certified enclosures and the
assertions carry a small documented slack on the lo side.

The multiplicity audit checks that no point lies in more containing balls
than the kissing-number cap allows (25 in R^4, the Hadwiger bound 3^d in real
dimension d = 2k^2 for matrices, central ball included), provided no ball
center sits strictly inside another ball.  `construct_kissing` replays the
reduction that justifies the cap: it rescales the centers of the balls
containing a point onto a common sphere and verifies that the resulting
equal-radius spheres touch the base sphere and do not overlap pairwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from sumprod.exactnum import (
    ComplexEnclosure,
    Interval,
    RMatrix,
    RQuaternion,
    certify_le,
    op1_norm,
    op1_norm_enclosure_matrix,
)

Element = Union[RQuaternion, RMatrix]

DEFAULT_SLACK = Fraction(1, 2**40)


class CenterSeparationViolated(ValueError):
    """Some ball center lies strictly inside another ball."""

    def __init__(self, x: Element, y: Element):
        super().__init__(f"center {y.text()} lies inside the ball at {x.text()}")
        self.x = x
        self.y = y


class DegenerateAllCentersEqualP(ValueError):
    """No rescalable center: every ball is centred at the common point."""


def kissing_bound(kind: str, k: int | None = None) -> int:
    """Multiplicity cap: 25 for quaternions, 3^(2k^2) for k x k matrices."""
    if kind == "quaternion":
        return 25
    if kind == "matrix":
        if k is None or k < 1:
            raise ValueError("matrix kissing bound needs the dimension k")
        return 3 ** (2 * k * k)
    raise ValueError(f"unknown space kind {kind!r}")


def distsq(a: RQuaternion, b: RQuaternion) -> Fraction:
    return (a - b).normsq()


def dot4(a: RQuaternion, b: RQuaternion) -> Fraction:
    return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z


@dataclass(frozen=True)
class Ball:
    """Closed ball; quaternion radii are exact squared rationals, matrix
    radii are the operator 1-norm of a stored exact difference matrix."""

    center: Element
    radius_sq: Fraction | None = None
    radius_vec: RMatrix | None = None

    def __post_init__(self) -> None:
        if (self.radius_sq is None) == (self.radius_vec is None):
            raise ValueError("exactly one radius representation required")
        if self.radius_sq is not None and self.radius_sq < 0:
            raise ValueError("negative squared radius")

    def radius_enclosure(self, width: Fraction) -> Interval:
        if self.radius_vec is not None:
            return op1_norm(self.radius_vec, width)
        from sumprod.exactnum import rational_sqrt_interval
        return rational_sqrt_interval(self.radius_sq, width)

    def contains(self, point: Element, slack: Fraction = DEFAULT_SLACK) -> bool:
        """Closed membership; exact for quaternions, certified for matrices."""
        if self.radius_sq is not None:
            return distsq(point, self.center) <= self.radius_sq
        diff = point - self.center
        return certify_le(
            lambda w: op1_norm(diff, w),
            lambda w: op1_norm(self.radius_vec, w),
            slack=slack,
        )

    def strictly_contains(self, point: Element, slack: Fraction = DEFAULT_SLACK) -> bool:
        if self.radius_sq is not None:
            return distsq(point, self.center) < self.radius_sq
        diff = point - self.center
        # strict interior certified only beyond the slack band
        return not certify_le(
            lambda w: op1_norm(self.radius_vec, w),
            lambda w: op1_norm(diff, w),
            slack=slack,
        )


def quaternion_ball(center: RQuaternion, radius_sq: Fraction) -> Ball:
    return Ball(center=center, radius_sq=radius_sq)


def matrix_ball(center: RMatrix, radius_vec: RMatrix) -> Ball:
    return Ball(center=center, radius_vec=radius_vec)


def check_center_separation(balls: dict[Element, Ball],
                            slack: Fraction = DEFAULT_SLACK) -> None:
    """Raise CenterSeparationViolated if any center is strictly inside
    another ball (the hypothesis of the kissing-multiplicity lemma)."""
    items = list(balls.items())
    for i, (x, bx) in enumerate(items):
        for y, _ in items:
            if x is y or x == y:
                continue
            if bx.strictly_contains(y, slack=slack):
                raise CenterSeparationViolated(x, y)


@dataclass(frozen=True)
class AuditResult:
    max_multiplicity: int
    offenders: list[Element]
    owner_violations: list[Element]
    per_point: list[int]


def _quick_reject(point: RQuaternion, center: RQuaternion, rsq: Fraction) -> bool:
    # cheap per-coordinate necessary condition before the full squared norm
    d = point.w - center.w
    return d * d > rsq


def audit_multiplicity(
    balls: dict[Element, Ball],
    points: Sequence[tuple[Element, Sequence[Element]]],
    cap: int,
    slack: Fraction = DEFAULT_SLACK,
) -> AuditResult:
    """Count, for each point, how many of the balls contain it (closed).

    `points` carries each point together with the keys of the balls that are
    supposed to own it; ownership must be a subset of geometric containment.
    Center separation is a precondition and is checked first.
    """
    check_center_separation(balls, slack=slack)
    exact = all(b.radius_sq is not None for b in balls.values())
    per_point: list[int] = []
    offenders: list[Element] = []
    owner_violations: list[Element] = []
    for point, owners in points:
        containing = set()
        for key, ball in balls.items():
            if exact and _quick_reject(point, ball.center, ball.radius_sq):
                continue
            if ball.contains(point, slack=slack):
                containing.add(key)
        mult = len(containing)
        per_point.append(mult)
        if mult > cap:
            offenders.append(point)
        if any(o not in containing for o in owners):
            owner_violations.append(point)
    return AuditResult(
        max_multiplicity=max(per_point, default=0),
        offenders=offenders,
        owner_violations=owner_violations,
        per_point=per_point,
    )


# ---------------------------------------------------------------------------
# the touching-sphere construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KissingConfig:
    """Equal-radius spheres touching a base sphere, rescaled from ball
    centers around a common point.

    The sphere centers P + (r/|Q_i - P|)(Q_i - P) are irrational in general,
    so they are kept in ray form (direction Q_i - P plus its squared length)
    and all verification is done on exact squared quantities (quaternions) or
    certified enclosures (matrices).
    """

    kind: str
    base_point: Element
    rays: tuple[Element, ...]          # the Q_i with Q_i != P
    radius_sq: Fraction | None = None  # r^2, quaternion case
    radius_iv: Interval | None = None  # r enclosure, matrix case
    touching_ok: bool = field(default=False, compare=False)
    nonoverlap_ok: bool = field(default=False, compare=False)

    def sphere_count(self) -> int:
        return len(self.rays)


def _construct_quaternion(P: RQuaternion, rays: list[RQuaternion]) -> KissingConfig:
    lensq = [distsq(q, P) for q in rays]
    r_sq = min(lensq)
    # touching: |C_i - P|^2 = (r^2 / lensq_i) * lensq_i = r^2 identically
    touching = all(r_sq * l / l == r_sq for l in lensq)
    # non-overlap: |C_i - C_j|^2 >= r^2 iff <u_i,u_j> <= l_i l_j / 2
    ok = True
    us = [q - P for q in rays]
    for i in range(len(rays)):
        for j in range(i + 1, len(rays)):
            d = dot4(us[i], us[j])
            if d > 0 and 4 * d * d > lensq[i] * lensq[j]:
                ok = False
    return KissingConfig(
        kind="quaternion", base_point=P, rays=tuple(rays),
        radius_sq=r_sq, touching_ok=touching, nonoverlap_ok=ok,
    )


def _scaled_diff_entries(u_i: RMatrix, t_i: Interval, u_j: RMatrix,
                         t_j: Interval) -> tuple[tuple[ComplexEnclosure, ...], ...]:
    k = u_i.k
    rows = []
    for r in range(k):
        row = []
        for c in range(k):
            a, b = u_i.rows[r][c], u_j.rows[r][c]
            row.append(ComplexEnclosure(
                t_i * a.re - t_j * b.re, t_i * a.im - t_j * b.im,
            ))
        rows.append(tuple(row))
    return tuple(rows)


def _construct_matrix(P: RMatrix, rays: list[RMatrix],
                      slack: Fraction) -> KissingConfig:
    width = slack / 4
    us = [q - P for q in rays]
    norms = [op1_norm(u, width) for u in us]
    r_iv = min(norms, key=lambda iv: (iv.lo, iv.hi))
    scales = [r_iv / n for n in norms]  # t_i = r / |u_i|
    touching = all(
        (t * n).lo <= r_iv.hi + slack and (t * n).hi >= r_iv.lo - slack
        for t, n in zip(scales, norms)
    )
    ok = True
    for i in range(len(rays)):
        for j in range(i + 1, len(rays)):
            entries = _scaled_diff_entries(us[i], scales[i], us[j], scales[j])
            dij = op1_norm_enclosure_matrix(entries, width)
            if dij.hi < r_iv.lo - slack:
                ok = False
    return KissingConfig(
        kind="matrix", base_point=P, rays=tuple(rays),
        radius_iv=r_iv, touching_ok=touching, nonoverlap_ok=ok,
    )


def construct_kissing(
    P: Element,
    centers: Sequence[Element],
    balls: Sequence[Ball],
    slack: Fraction = DEFAULT_SLACK,
) -> KissingConfig:
    """Rescale the given ball centers onto the sphere of radius r around P
    (r = smallest center distance) and verify the touching/non-overlap
    invariants of the resulting equal-radius sphere configuration.

    Preconditions: P lies in every ball, no center is strictly inside
    another ball, and at least one center differs from P.
    """
    if len(centers) != len(balls):
        raise ValueError("centers and balls must align")
    for ball in balls:
        if not ball.contains(P, slack=slack):
            raise ValueError("P must be contained in every ball")
    keyed = {c: b for c, b in zip(centers, balls)}
    check_center_separation(keyed, slack=slack)
    rays = [c for c in centers if c != P]
    if not rays:
        raise DegenerateAllCentersEqualP("every center equals the base point")
    if isinstance(P, RQuaternion):
        return _construct_quaternion(P, rays)
    return _construct_matrix(P, rays, slack)
