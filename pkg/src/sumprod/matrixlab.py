"""Normalized-matrix machinery for the well-conditioned matrix setting.

A matrix A is normalized by a principal k-th root rho of det(A) so that
A~ = A / rho has determinant 1; matrices are then partitioned into classes by
the quadrant of rho and a grid of intervals over the entry components of A~.
Within one class the sum of two matrices is provably invertible and the
quotient map contracts, which is what the witness pipeline needs.

rho is irrational in general, so it is computed as a certified rectangle
enclosure: the modulus |det|^(1/k) comes from integer k-th roots of scaled
rationals, and cos/sin of arg(det)/k come from exact half-angle identities
(k = 2, 4) or rational bisection of the triple-angle cubic (k = 3).  No
floating point is involved anywhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from sumprod.exactnum import (
    ComplexEnclosure,
    GaussianRational,
    Interval,
    RMatrix,
    Singular,
    Unresolved,
    block2,
    certify_le,
    certify_sign,
    enclosure_floor,
    interval_sqrt,
    matrix_det,
    matrix_inverse,
    op1_norm,
    op1_norm_enclosure_matrix,
    rational_root_interval,
)
from sumprod.setalgebra import ElementSet

DEFAULT_SLACK = Fraction(1, 2**40)


class CondBoundViolated(ValueError):
    """A normalized entry left the [-Mk, Mk] range that the condition-number
    hypothesis guarantees; the input violated cond(A) <= M."""


# ---------------------------------------------------------------------------
# principal k-th root of an exact complex rational
# ---------------------------------------------------------------------------

def _clamp_unit(iv: Interval) -> Interval:
    return Interval(max(iv.lo, Fraction(-1)), min(iv.hi, Fraction(1)))


def _cos_sin_arg(z: GaussianRational, width: Fraction) -> tuple[Interval, Interval, int]:
    """Enclosures of cos(arg z), sin(arg z) plus the sign of arg z in (-pi, pi]."""
    nsq = z.normsq()
    cos_sq = z.re * z.re / nsq
    sin_sq = z.im * z.im / nsq
    cos_abs = _clamp_unit(interval_sqrt(Interval.point(cos_sq), width))
    sin_abs = _clamp_unit(interval_sqrt(Interval.point(sin_sq), width))
    cos_iv = cos_abs if z.re > 0 else (-cos_abs if z.re < 0 else Interval.point(0))
    sin_iv = sin_abs if z.im > 0 else (-sin_abs if z.im < 0 else Interval.point(0))
    if z.im > 0:
        arg_sign = 1
    elif z.im < 0:
        arg_sign = -1
    else:
        arg_sign = 1 if z.re < 0 else 0  # arg is pi or 0 exactly
    return cos_iv, sin_iv, arg_sign


def _half_angle(cos_iv: Interval, arg_sign: int, width: Fraction) -> tuple[Interval, Interval]:
    """cos, sin of half the angle, given cos of an angle in (-pi, pi]."""
    c2 = Interval(max((1 + cos_iv.lo) / 2, Fraction(0)), (1 + cos_iv.hi) / 2)
    s2 = Interval(max((1 - cos_iv.hi) / 2, Fraction(0)), (1 - cos_iv.lo) / 2)
    cos_half = _clamp_unit(interval_sqrt(c2, width))
    sin_half = _clamp_unit(interval_sqrt(s2, width))
    if arg_sign < 0:
        sin_half = -sin_half
    elif arg_sign == 0:
        sin_half = Interval.point(0)
    return cos_half, sin_half


def _triple_angle_inverse(target: Fraction, width: Fraction) -> Interval:
    # unique c in [1/2, 1] with 4c^3 - 3c = target, for target in [-1, 1]
    lo, hi = Fraction(1, 2), Fraction(1)
    while hi - lo > width:
        mid = (lo + hi) / 2
        if 4 * mid**3 - 3 * mid <= target:
            lo = mid
        else:
            hi = mid
    return Interval(lo, hi)


def _third_angle(cos_iv: Interval, arg_sign: int, width: Fraction) -> tuple[Interval, Interval]:
    cos_iv = _clamp_unit(cos_iv)
    lo_root = _triple_angle_inverse(cos_iv.lo, width)
    hi_root = _triple_angle_inverse(cos_iv.hi, width)
    cos_third = Interval(lo_root.lo, hi_root.hi)
    s2 = Interval(
        max(Fraction(0), 1 - cos_third.hi * cos_third.hi),
        max(Fraction(0), 1 - cos_third.lo * cos_third.lo),
    )
    sin_third = _clamp_unit(interval_sqrt(s2, width))
    if arg_sign < 0:
        sin_third = -sin_third
    elif arg_sign == 0:
        sin_third = Interval.point(0)
    return cos_third, sin_third


def principal_kth_root(z: GaussianRational, k: int, width: Fraction) -> ComplexEnclosure:
    """Certified rectangle around the principal k-th root of z != 0.

    Principal means the root with argument in (-pi/k, pi/k]; supported for
    k in 1..4, which covers every dimension the verifier suite runs at.
    """
    if z.is_zero():
        raise Singular("k-th root of zero requested")
    if k == 1:
        return ComplexEnclosure.exact(z)
    if k not in (2, 3, 4):
        raise ValueError(f"principal_kth_root supports k in 1..4, got {k}")
    sub = width / 8
    while True:
        modulus = rational_root_interval(z.normsq(), 2 * k, sub)
        cos_iv, sin_iv, arg_sign = _cos_sin_arg(z, sub)
        if k == 2:
            c, s = _half_angle(cos_iv, arg_sign, sub)
        elif k == 4:
            c2, _ = _half_angle(cos_iv, arg_sign, sub)
            c, s = _half_angle(c2, arg_sign, sub)
        else:
            c, s = _third_angle(cos_iv, arg_sign, sub)
        root = ComplexEnclosure(modulus * c, modulus * s)
        if root.re.width <= width and root.im.width <= width:
            return root
        sub /= 64


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------

TildeEntries = tuple[tuple[ComplexEnclosure, ...], ...]


@dataclass(frozen=True)
class NormalizedMatrix:
    """A matrix together with enclosures of rho = det^(1/k) and A~ = A/rho."""

    original: RMatrix
    rho: ComplexEnclosure
    tilde: TildeEntries
    width: Fraction
    refinable: bool = True

    def at_width(self, width: Fraction) -> "NormalizedMatrix":
        if not self.refinable or width >= self.width:
            return self
        return normalize(self.original, width)

    def tilde_norm(self, width: Fraction) -> Interval:
        return op1_norm_enclosure_matrix(self.at_width(width).tilde, width)

    def det_tilde_enclosure(self) -> ComplexEnclosure:
        return _interval_det(self.tilde)

    @staticmethod
    def raw(A: RMatrix) -> "NormalizedMatrix":
        """Wrap A as its own tilde (no normalization); for negative tests."""
        tilde = tuple(
            tuple(ComplexEnclosure.exact(a) for a in row) for row in A.rows
        )
        return NormalizedMatrix(A, ComplexEnclosure.exact(GaussianRational.of(1)),
                                tilde, Fraction(0), refinable=False)


def _interval_det(entries: TildeEntries) -> ComplexEnclosure:
    k = len(entries)
    if k == 1:
        return entries[0][0]
    total: ComplexEnclosure | None = None
    for j in range(k):
        minor = tuple(
            tuple(entries[i][c] for c in range(k) if c != j) for i in range(1, k)
        )
        term = entries[0][j] * _interval_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    assert total is not None
    return total


def normalize(A: RMatrix, width: Fraction = Fraction(1, 2**24)) -> NormalizedMatrix:
    """A~ = A / rho with rho the principal k-th root of det(A).

    The rho enclosure is refined until it excludes zero and every entry of
    the A~ rectangle matrix is narrower than `width`.
    """
    det = matrix_det(A)
    if det.is_zero():
        raise Singular("cannot normalize a singular matrix")
    w = width
    while True:
        rho = principal_kth_root(det, A.k, w)
        if not rho.contains_zero():
            tilde = tuple(
                tuple(ComplexEnclosure.exact(a) / rho for a in row)
                for row in A.rows
            )
            widths = [
                max(e.re.width, e.im.width) for row in tilde for e in row
            ]
            if max(widths) <= width:
                return NormalizedMatrix(A, rho, tilde, width)
        w /= 64


def condition_number(A: RMatrix, width: Fraction = Fraction(1, 2**24)) -> Interval:
    """Enclosure of cond(A) = ||A||_1 * ||A^-1||_1; raises Singular."""
    inv = matrix_inverse(A)
    return op1_norm(A, width) * op1_norm(inv, width)


# ---------------------------------------------------------------------------
# class partition
# ---------------------------------------------------------------------------

def compute_delta(k: int, M: Fraction) -> Fraction:
    """Explicit uniform-continuity radius for det on the ||.|| <= 2Mk ball.

    |det A - det B| <= k max(||A||,||B||)^(k-1) ||A-B|| by column telescoping,
    so ||A - B|| < delta = 1 / (2k (2Mk)^(k-1)) forces |det A - det B| < 1/2.
    """
    if k < 1 or M < 1:
        raise ValueError("need k >= 1 and M >= 1")
    M = Fraction(M)
    return 1 / (2 * k * (2 * M * k) ** (k - 1))


@dataclass(frozen=True)
class FamilyParams:
    """Dimension, condition bound, and the derived grid constants."""

    k: int
    M: Fraction
    delta: Fraction
    epsilon: Fraction

    @staticmethod
    def for_dimension(k: int, M: Fraction | int,
                      delta: Fraction | None = None,
                      epsilon: Fraction | None = None) -> "FamilyParams":
        M = Fraction(M)
        if delta is None:
            delta = compute_delta(k, M)
        if epsilon is None:
            epsilon = min(delta / (3 * M * k**2), Fraction(1, 6) / (M**2 * k**3))
        if delta <= 0 or epsilon <= 0:
            raise ValueError("delta and epsilon must be positive")
        return FamilyParams(k, M, delta, epsilon)

    @property
    def grid_count(self) -> int:
        return -(-1 // self.epsilon).__int__() if False else int(-(-1 / self.epsilon).__ceil__())

    @property
    def grid_span(self) -> Fraction:
        return self.M * self.k

    @property
    def cell_width(self) -> Fraction:
        return 2 * self.grid_span / self.grid_count

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "M": str(self.M),
            "delta": str(self.delta),
            "epsilon": str(self.epsilon),
        }

    @staticmethod
    def from_json(data: dict) -> "FamilyParams":
        return FamilyParams.for_dimension(
            int(data["k"]),
            Fraction(data["M"]),
            Fraction(data["delta"]) if "delta" in data and data["delta"] else None,
            Fraction(data["epsilon"]) if "epsilon" in data and data["epsilon"] else None,
        )


@dataclass(frozen=True)
class ClassKey:
    """rho quadrant (1..4, axes rounded counterclockwise-first) plus the grid
    cell index of each of the 2k^2 entry components of A~."""

    quadrant: int
    cells: tuple[int, ...]

    def text(self) -> str:
        return f"Q{self.quadrant}:" + ",".join(str(c) for c in self.cells)


def _rho_quadrant(A: RMatrix, width: Fraction) -> int:
    def re_fn(w: Fraction) -> Interval:
        return normalize(A, w).rho.re

    def im_fn(w: Fraction) -> Interval:
        return normalize(A, w).rho.im

    sr = certify_sign(re_fn)
    si = certify_sign(im_fn)
    if sr > 0:
        return 1 if si >= 0 else 4
    if sr == 0:
        return 1 if si > 0 else 3
    return 2 if si >= 0 else 3


@dataclass(frozen=True)
class ClassPartition:
    classes: list[tuple[ClassKey, ElementSet]]
    violators: list[RMatrix]
    boundary_warnings: list[tuple[RMatrix, int]]  # (matrix, component index)

    def largest(self) -> tuple[ClassKey, ElementSet]:
        return self.classes[0]


def _cell_of_point(v: Fraction, params: FamilyParams) -> int:
    span, count = params.grid_span, params.grid_count
    if v < -span or v > span:
        raise CondBoundViolated(
            f"normalized entry component {v} outside [-{span}, {span}]"
        )
    j = int((v + span) / params.cell_width)
    return min(j, count - 1)


def class_partition(A: ElementSet, params: FamilyParams) -> ClassPartition:
    """Group matrices by rho quadrant and the grid cells of their normalized
    entry components; classes come back sorted largest first.

    Matrices whose condition number provably exceeds M are excluded and
    reported.  An entry enclosure that still straddles a cell boundary at the
    floor width is assigned to the lower cell and recorded as a warning.
    """
    if A.is_quaternion():
        raise TypeError("class partition is defined for matrix sets")
    floor = enclosure_floor()
    groups: dict[ClassKey, list[RMatrix]] = {}
    violators: list[RMatrix] = []
    warnings: list[tuple[RMatrix, int]] = []
    for mat in A.elements:
        cond = condition_number(mat)
        if cond.lo > params.M:
            violators.append(mat)
            continue
        quadrant = _rho_quadrant(mat, Fraction(1, 2**24))
        cells: list[int] = []
        width = Fraction(1, 2**24)
        norm = normalize(mat, width)
        for i in range(mat.k):
            for j in range(mat.k):
                for comp in (0, 1):
                    idx = None
                    w = width
                    while True:
                        entry = norm.at_width(w).tilde[i][j]
                        iv = entry.re if comp == 0 else entry.im
                        lo_cell = _cell_of_point(iv.lo, params)
                        hi_cell = _cell_of_point(iv.hi, params)
                        if lo_cell == hi_cell or iv.lo == iv.hi:
                            idx = lo_cell
                            break
                        if w <= floor:
                            idx = lo_cell
                            warnings.append((mat, 2 * (i * mat.k + j) + comp))
                            break
                        w /= 2**8
                        norm = norm.at_width(w)
                    cells.append(idx)
        key = ClassKey(quadrant, tuple(cells))
        groups.setdefault(key, []).append(mat)
    ordered = sorted(
        groups.items(),
        key=lambda kv: (-len(kv[1]), kv[0].quadrant, kv[0].cells),
    )
    classes = [(key, ElementSet.of(mats)) for key, mats in ordered]
    return ClassPartition(classes, violators, warnings)


# ---------------------------------------------------------------------------
# claim / lemma verifiers
# ---------------------------------------------------------------------------

def check_claim_norm_bounds(N: NormalizedMatrix, M: Fraction | int,
                            slack: Fraction = DEFAULT_SLACK) -> bool:
    """Certify 1/k <= ||A~||_1 <= Mk (up to slack); Unresolved if it cannot
    be decided at the floor width."""
    M = Fraction(M)
    k = N.original.k
    norm_fn = N.tilde_norm
    lower = certify_le(lambda w: Interval.point(Fraction(1, k)), norm_fn, slack)
    upper = certify_le(norm_fn, lambda w: Interval.point(M * k), slack)
    return lower and upper


@dataclass(frozen=True)
class SumInvertibility:
    invertible: bool
    eq15_ok: bool
    value: Interval
    bound: Fraction


def check_sum_invertible(B: RMatrix, D: RMatrix, params: FamilyParams,
                         slack: Fraction = DEFAULT_SLACK) -> SumInvertibility:
    """For same-class B, D: det(B + D) != 0 exactly, and the perturbation
    norm ||(b/(b+d)) (B~ - D~)|| stays under 3Mk^2 eps <= delta."""
    invertible = not matrix_det(B + D).is_zero()
    bound = 3 * params.M * params.k**2 * params.epsilon

    def value_fn(w: Fraction) -> Interval:
        nb, nd = normalize(B, w), normalize(D, w)
        coeff = nb.rho.abs(w) / (nb.rho + nd.rho).abs(w)
        diff = tuple(
            tuple(eb - ed for eb, ed in zip(rb, rd))
            for rb, rd in zip(nb.tilde, nd.tilde)
        )
        return coeff * op1_norm_enclosure_matrix(diff, w)

    eq15_ok = certify_le(value_fn, lambda w: Interval.point(bound), slack)
    return SumInvertibility(invertible, eq15_ok, value_fn(Fraction(1, 2**24)), bound)


@dataclass(frozen=True)
class ContractionReport:
    contraction_ok: bool
    dnorm_ok: bool
    lhs: Interval
    rhs: Interval
    dnorm: Interval


def check_contraction(A: RMatrix, B: RMatrix, C: RMatrix, D: RMatrix,
                      slack: Fraction = DEFAULT_SLACK) -> ContractionReport:
    """Certify ||D (B+D)^-1|| <= 1 and the quotient-map contraction
    ||(A+C)(B+D)^-1 - A B^-1|| <= ||C D^-1 - A B^-1|| for one quadruple.

    All matrix arithmetic is exact; only the final operator-norm comparisons
    go through enclosures (exact squared moduli when k = 1).
    """
    sum_inv = matrix_inverse(B + D)
    lhs_mat = (A + C) * sum_inv - A * matrix_inverse(B)
    rhs_mat = C * matrix_inverse(D) - A * matrix_inverse(B)
    dmat = D * sum_inv
    if A.k == 1:
        lsq, rsq = lhs_mat.rows[0][0].normsq(), rhs_mat.rows[0][0].normsq()
        dsq = dmat.rows[0][0].normsq()
        w = Fraction(1, 2**40)
        return ContractionReport(
            contraction_ok=lsq <= rsq,
            dnorm_ok=dsq <= 1,
            lhs=interval_sqrt(Interval.point(lsq), w),
            rhs=interval_sqrt(Interval.point(rsq), w),
            dnorm=interval_sqrt(Interval.point(dsq), w),
        )
    contraction_ok = certify_le(
        lambda w: op1_norm(lhs_mat, w), lambda w: op1_norm(rhs_mat, w), slack
    )
    dnorm_ok = certify_le(
        lambda w: op1_norm(dmat, w), lambda w: Interval.point(1), slack
    )
    w = Fraction(1, 2**30)
    return ContractionReport(
        contraction_ok, dnorm_ok,
        op1_norm(lhs_mat, w), op1_norm(rhs_mat, w), op1_norm(dmat, w),
    )


@dataclass(frozen=True)
class BlockVerdict:
    verdict: str  # satisfied | ratio_equal | violated
    block_det: GaussianRational
    identity_ok: bool


def check_block_hypothesis(A: RMatrix, B: RMatrix, C: RMatrix,
                           D: RMatrix) -> BlockVerdict:
    """Classify a quadruple against the block-matrix hypothesis and
    cross-check det(A C; B D) = det(D) det(AB^-1 - CD^-1) det(B) exactly."""
    ratio_left = A * matrix_inverse(B)
    ratio_right = C * matrix_inverse(D)
    block = block2(A, C, B, D)
    bdet = matrix_det(block)
    factored = (
        matrix_det(D)
        * matrix_det(ratio_left - ratio_right)
        * matrix_det(B)
    )
    identity_ok = bdet == factored
    if ratio_left == ratio_right:
        verdict = "ratio_equal"
    elif not bdet.is_zero():
        verdict = "satisfied"
    else:
        verdict = "violated"
    return BlockVerdict(verdict, bdet, identity_ok)


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------

def chang_family(n: int, k: int = 2) -> ElementSet:
    """Unitriangular family with top-corner entries i/n, i = 1..n.

    Sumset and productset both have exactly 2n - 1 elements and every
    condition number is (1 + i/n)^2 <= 4; the family shows the block-matrix
    hypothesis cannot be dropped.
    """
    if n < 1 or k < 2:
        raise ValueError("need n >= 1 and k >= 2")
    mats = []
    for i in range(1, n + 1):
        rows = [[Fraction(1) if r == c else Fraction(0) for c in range(k)]
                for r in range(k)]
        rows[0][k - 1] = Fraction(i, n)
        mats.append(RMatrix.from_rationals(rows))
    return ElementSet.of(mats)


def _cluster_base(params: FamilyParams) -> RMatrix:
    # det = 1 exactly, entries sitting at centers of grid cells, cond ~ 1
    if params.k != 2:
        raise ValueError("cluster families are generated for k = 2")
    g = params.grid_count
    span = params.grid_span
    # entry value at the center of the cell containing it: odd multiples of
    # half the cell width; chosen so a*d - b*c = 1 exactly
    h = params.cell_width
    base = int(1 / h) if h < 1 else 1
    denom = 2 * base
    a, b, c, d = denom + 1, 1, -1, denom - 1
    # (denom+1)(denom-1) - (1)(-1) = denom^2, rescale by denom
    return RMatrix.from_rationals([
        [Fraction(a, denom), Fraction(b, denom)],
        [Fraction(c, denom), Fraction(d, denom)],
    ])


def cluster_family(n: int, params: FamilyParams, seed: int = 0,
                   scales: int = 1, complex_part: bool = False) -> ElementSet:
    """In-class family: positive scalar multiples of tiny perturbations of a
    det-1 base matrix whose entries sit at grid cell centers.

    Every member normalizes back to (a perturbation of) the same base, so the
    whole family lands in a single class of the partition; with scales > 1
    the ratio set is rich enough for non-degenerate pipeline runs.
    """
    import random as _random

    rng = _random.Random(seed)
    base = _cluster_base(params)
    eps_den = 2**30
    out: dict[RMatrix, None] = {}
    tries = 0
    while len(out) < n and tries < 50 * n:
        tries += 1
        t = len(out)
        scale = Fraction(1 + (t % scales))

        def wiggle() -> GaussianRational:
            re = Fraction(rng.randint(-4, 4), eps_den)
            im = Fraction(rng.randint(-4, 4), eps_den) if complex_part else Fraction(0)
            return GaussianRational(re, im)

        pert = RMatrix.from_rows([
            [base.rows[i][j] + wiggle() for j in range(2)] for i in range(2)
        ])
        if matrix_det(pert).is_zero():
            continue
        out[pert.scale(scale)] = None
    if len(out) < n:
        raise RuntimeError("could not build the requested cluster family")
    return ElementSet.of(out)
