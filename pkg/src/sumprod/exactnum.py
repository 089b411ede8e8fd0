"""Exact arithmetic substrate: rationals, Gaussian rationals, quaternions with
rational coordinates, small exact matrices, and certified rational enclosures
for the irrational quantities (square roots, operator 1-norms).

Everything that decides set membership or a counting identity is computed in
exact rational arithmetic.  Quantities that are genuinely irrational (entry
moduli, operator norms) are represented by `Interval` enclosures [lo, hi] with
rational endpoints and on-demand refinement; comparisons that an enclosure
cannot resolve are retried at smaller widths down to a floor and then raise
`Unresolved` instead of guessing.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Callable, Iterable, Union

Rational = Fraction

RationalLike = Union[Fraction, int]

DEFAULT_FLOOR = Fraction(1, 2**64)

_ENV_FLOOR = "SUMPROD_ENCLOSURE_FLOOR"


class ZeroInverse(ZeroDivisionError):
    """Inverse of the zero quaternion / zero Gaussian rational requested."""


class Singular(ZeroDivisionError):
    """Matrix inverse requested for a matrix with zero determinant."""


class Unresolved(ArithmeticError):
    """An enclosure comparison could not be decided at the floor width."""


def enclosure_floor() -> Fraction:
    """Refinement floor width; overridable via SUMPROD_ENCLOSURE_FLOOR."""
    raw = os.environ.get(_ENV_FLOOR)
    if raw is None:
        return DEFAULT_FLOOR
    floor = Fraction(raw)
    if floor <= 0:
        raise ValueError(f"{_ENV_FLOOR} must be a positive rational, got {raw!r}")
    return floor


# ---------------------------------------------------------------------------
# canonical text forms (used by all file I/O and by canonical_key)
# ---------------------------------------------------------------------------

def rat_text(v: RationalLike) -> str:
    f = Fraction(v)
    return f"{f.numerator}/{f.denominator}"


def parse_rat(text: str) -> Fraction:
    return Fraction(text)


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class GaussianRational:
    """Complex number with exact rational real and imaginary parts."""

    re: Fraction
    im: Fraction

    @staticmethod
    def of(re: RationalLike, im: RationalLike = 0) -> "GaussianRational":
        return GaussianRational(Fraction(re), Fraction(im))

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def normsq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def inverse(self) -> "GaussianRational":
        n = self.normsq()
        if not n:
            raise ZeroInverse("0 has no inverse")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other: "GaussianRational") -> "GaussianRational":
        return self * other.inverse()

    def scale(self, c: RationalLike) -> "GaussianRational":
        c = Fraction(c)
        return GaussianRational(self.re * c, self.im * c)

    def text(self) -> str:
        return f"{rat_text(self.re)},{rat_text(self.im)}"


GR_ZERO = GaussianRational(Fraction(0), Fraction(0))
GR_ONE = GaussianRational(Fraction(1), Fraction(0))


# ---------------------------------------------------------------------------
# quaternions with rational coordinates
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class RQuaternion:
    """Quaternion w + x i + y j + z k with exact rational coordinates.

    Multiplication follows the Hamilton rules (ij = k, ji = -k); the squared
    norm w^2+x^2+y^2+z^2 is an exact rational and is multiplicative, so all
    norm comparisons in the pipeline are done on squared norms and stay exact.
    """

    w: Fraction
    x: Fraction
    y: Fraction
    z: Fraction

    @staticmethod
    def of(w: RationalLike, x: RationalLike = 0, y: RationalLike = 0,
           z: RationalLike = 0) -> "RQuaternion":
        return RQuaternion(Fraction(w), Fraction(x), Fraction(y), Fraction(z))

    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.w, self.x, self.y, self.z)

    def __add__(self, o: "RQuaternion") -> "RQuaternion":
        return RQuaternion(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)

    def __sub__(self, o: "RQuaternion") -> "RQuaternion":
        return RQuaternion(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)

    def __neg__(self) -> "RQuaternion":
        return RQuaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, o: "RQuaternion") -> "RQuaternion":
        w1, x1, y1, z1 = self.w, self.x, self.y, self.z
        w2, x2, y2, z2 = o.w, o.x, o.y, o.z
        return RQuaternion(
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        )

    def conjugate(self) -> "RQuaternion":
        return RQuaternion(self.w, -self.x, -self.y, -self.z)

    def normsq(self) -> Fraction:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def is_zero(self) -> bool:
        return not (self.w or self.x or self.y or self.z)

    def inverse(self) -> "RQuaternion":
        n = self.normsq()
        if not n:
            raise ZeroInverse("0 has no inverse")
        return RQuaternion(self.w / n, -self.x / n, -self.y / n, -self.z / n)

    def scale(self, c: RationalLike) -> "RQuaternion":
        c = Fraction(c)
        return RQuaternion(self.w * c, self.x * c, self.y * c, self.z * c)

    def sort_key(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return self.coords()

    def text(self) -> str:
        return "({},{},{},{})".format(*(rat_text(c) for c in self.coords()))


Q_ZERO = RQuaternion.of(0)
Q_ONE = RQuaternion.of(1)


def quat_inverse(q: RQuaternion) -> RQuaternion:
    """conjugate(q) / normsq(q); exact, q * quat_inverse(q) == 1."""
    return q.inverse()


def parse_quaternion(text: str) -> RQuaternion:
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise ValueError(f"bad quaternion literal: {text!r}")
    parts = body[1:-1].split(",")
    if len(parts) != 4:
        raise ValueError(f"bad quaternion literal: {text!r}")
    return RQuaternion(*(Fraction(p) for p in parts))


# ---------------------------------------------------------------------------
# exact k x k matrices over the Gaussian rationals
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class RMatrix:
    """Square matrix with exact GaussianRational entries (row-major tuples)."""

    k: int
    rows: tuple[tuple[GaussianRational, ...], ...]

    @staticmethod
    def from_rows(rows: Iterable[Iterable[GaussianRational]]) -> "RMatrix":
        tup = tuple(tuple(r) for r in rows)
        k = len(tup)
        if k < 1 or any(len(r) != k for r in tup):
            raise ValueError("matrix must be square and non-empty")
        return RMatrix(k, tup)

    @staticmethod
    def from_rationals(rows: Iterable[Iterable[RationalLike]]) -> "RMatrix":
        return RMatrix.from_rows(
            [[GaussianRational.of(v) for v in row] for row in rows]
        )

    @staticmethod
    def identity(k: int) -> "RMatrix":
        return RMatrix.from_rows(
            [[GR_ONE if i == j else GR_ZERO for j in range(k)] for i in range(k)]
        )

    def entry(self, i: int, j: int) -> GaussianRational:
        return self.rows[i][j]

    def __add__(self, o: "RMatrix") -> "RMatrix":
        self._check_dim(o)
        return RMatrix(self.k, tuple(
            tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, o.rows)
        ))

    def __sub__(self, o: "RMatrix") -> "RMatrix":
        self._check_dim(o)
        return RMatrix(self.k, tuple(
            tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, o.rows)
        ))

    def __neg__(self) -> "RMatrix":
        return RMatrix(self.k, tuple(tuple(-a for a in r) for r in self.rows))

    def __mul__(self, o: "RMatrix") -> "RMatrix":
        self._check_dim(o)
        k = self.k
        cols = tuple(zip(*o.rows))
        return RMatrix(k, tuple(
            tuple(
                sum((a * b for a, b in zip(row, col)), GR_ZERO)
                for col in cols
            )
            for row in self.rows
        ))

    def scale(self, c: GaussianRational | RationalLike) -> "RMatrix":
        if not isinstance(c, GaussianRational):
            c = GaussianRational.of(c)
        return RMatrix(self.k, tuple(tuple(a * c for a in r) for r in self.rows))

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.rows for a in r)

    def inverse(self) -> "RMatrix":
        return matrix_inverse(self)

    def sort_key(self) -> tuple[Fraction, ...]:
        out: list[Fraction] = []
        for row in self.rows:
            for a in row:
                out.append(a.re)
                out.append(a.im)
        return tuple(out)

    def text(self) -> str:
        body = ";".join(
            "|".join(a.text() for a in row) for row in self.rows
        )
        return f"[{self.k}:{body}]"

    def _check_dim(self, o: "RMatrix") -> None:
        if self.k != o.k:
            raise ValueError(f"dimension mismatch: {self.k} vs {o.k}")


def block2(top_left: RMatrix, top_right: RMatrix,
           bottom_left: RMatrix, bottom_right: RMatrix) -> RMatrix:
    """Assemble the 2k x 2k matrix (TL TR; BL BR)."""
    k = top_left.k
    for m in (top_right, bottom_left, bottom_right):
        if m.k != k:
            raise ValueError("block dimension mismatch")
    rows = []
    for i in range(k):
        rows.append(top_left.rows[i] + top_right.rows[i])
    for i in range(k):
        rows.append(bottom_left.rows[i] + bottom_right.rows[i])
    return RMatrix.from_rows(rows)


def _lcm(a: int, b: int) -> int:
    from math import gcd
    return a // gcd(a, b) * b


def _gauss_int_exact_div(num: tuple[int, int], den: tuple[int, int]) -> tuple[int, int]:
    # exact division in Z[i]; Bareiss guarantees divisibility
    a, b = num
    c, d = den
    n = c * c + d * d
    re_num = a * c + b * d
    im_num = b * c - a * d
    re, re_r = divmod(re_num, n)
    im, im_r = divmod(im_num, n)
    if re_r or im_r:
        raise ArithmeticError("non-exact division in Bareiss elimination")
    return re, im


def matrix_det(A: RMatrix) -> GaussianRational:
    """Exact determinant via fraction-free Bareiss elimination.

    Denominators are cleared first so the elimination runs over the Gaussian
    integers, where every Bareiss division is exact; the common denominator is
    divided back out at the end.
    """
    k = A.k
    den = 1
    for row in A.rows:
        for a in row:
            den = _lcm(den, _lcm(a.re.denominator, a.im.denominator))
    m: list[list[tuple[int, int]]] = [
        [(int(a.re * den), int(a.im * den)) for a in row] for row in A.rows
    ]

    sign = 1
    prev = (1, 0)
    for col in range(k - 1):
        if m[col][col] == (0, 0):
            for r in range(col + 1, k):
                if m[r][col] != (0, 0):
                    m[col], m[r] = m[r], m[col]
                    sign = -sign
                    break
            else:
                return GR_ZERO
        pivot = m[col][col]
        for i in range(col + 1, k):
            for j in range(col + 1, k):
                pa, pb = pivot
                xa, xb = m[i][j]
                ya, yb = m[i][col]
                za, zb = m[col][j]
                num = (
                    pa * xa - pb * xb - (ya * za - yb * zb),
                    pa * xb + pb * xa - (ya * zb + yb * za),
                )
                m[i][j] = _gauss_int_exact_div(num, prev)
            m[i][col] = (0, 0)
        prev = pivot

    re, im = m[k - 1][k - 1]
    scale = Fraction(sign, den**k)
    return GaussianRational(re * scale, im * scale)


def matrix_inverse(A: RMatrix) -> RMatrix:
    """Exact inverse by Gauss-Jordan elimination; raises Singular if det = 0."""
    k = A.k
    work = [list(row) for row in A.rows]
    inv = [list(row) for row in RMatrix.identity(k).rows]
    for col in range(k):
        pivot_row = next(
            (r for r in range(col, k) if not work[r][col].is_zero()), None
        )
        if pivot_row is None:
            raise Singular("matrix is singular")
        if pivot_row != col:
            work[col], work[pivot_row] = work[pivot_row], work[col]
            inv[col], inv[pivot_row] = inv[pivot_row], inv[col]
        pinv = work[col][col].inverse()
        work[col] = [a * pinv for a in work[col]]
        inv[col] = [a * pinv for a in inv[col]]
        for r in range(k):
            if r == col or work[r][col].is_zero():
                continue
            f = work[r][col]
            work[r] = [a - f * b for a, b in zip(work[r], work[col])]
            inv[r] = [a - f * b for a, b in zip(inv[r], inv[col])]
    return RMatrix.from_rows(inv)


def matrix_to_json(A: RMatrix) -> list[list[list[str]]]:
    """Row-major nested arrays of ["re", "im"] rational strings."""
    return [[[rat_text(a.re), rat_text(a.im)] for a in row] for row in A.rows]


def matrix_from_json(data: list[list[list[str]]]) -> RMatrix:
    return RMatrix.from_rows(
        [[GaussianRational(Fraction(a[0]), Fraction(a[1])) for a in row]
         for row in data]
    )


# ---------------------------------------------------------------------------
# canonical keys
# ---------------------------------------------------------------------------

def canonical_key(x: RQuaternion | RMatrix) -> bytes:
    """Injective, run-stable byte key: equal keys iff exactly equal values."""
    if isinstance(x, RQuaternion):
        return b"q" + x.text().encode()
    if isinstance(x, RMatrix):
        return b"m" + x.text().encode()
    raise TypeError(f"no canonical key for {type(x).__name__}")


# ---------------------------------------------------------------------------
# rational intervals (NormEnclosure) and certified square/k-th roots
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Interval:
    """Closed rational interval [lo, hi] enclosing one real value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(v: RationalLike) -> "Interval":
        f = Fraction(v)
        return Interval(f, f)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def is_point(self) -> bool:
        return self.lo == self.hi

    def __add__(self, o: "Interval | RationalLike") -> "Interval":
        o = _as_interval(o)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __sub__(self, o: "Interval | RationalLike") -> "Interval":
        o = _as_interval(o)
        return Interval(self.lo - o.hi, self.hi - o.lo)

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __mul__(self, o: "Interval | RationalLike") -> "Interval":
        o = _as_interval(o)
        cands = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(cands), max(cands))

    __rmul__ = __mul__

    def __truediv__(self, o: "Interval | RationalLike") -> "Interval":
        o = _as_interval(o)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval divisor contains zero")
        cands = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return Interval(min(cands), max(cands))

    def square(self) -> "Interval":
        if self.lo >= 0:
            return Interval(self.lo * self.lo, self.hi * self.hi)
        if self.hi <= 0:
            return Interval(self.hi * self.hi, self.lo * self.lo)
        return Interval(Fraction(0), max(self.lo * self.lo, self.hi * self.hi))

    def abs(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(Fraction(0), max(-self.lo, self.hi))

    def contains(self, v: RationalLike) -> bool:
        return self.lo <= v <= self.hi

    def max_with(self, o: "Interval") -> "Interval":
        return Interval(max(self.lo, o.lo), max(self.hi, o.hi))


NormEnclosure = Interval


def _as_interval(v: "Interval | RationalLike") -> Interval:
    return v if isinstance(v, Interval) else Interval.point(v)


def interval_sum(items: Iterable[Interval]) -> Interval:
    total = Interval.point(0)
    for it in items:
        total = total + it
    return total


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of a non-negative integer."""
    if n < 0 or k < 1:
        raise ValueError("iroot needs n >= 0, k >= 1")
    if n == 0:
        return 0
    if k == 1:
        return n
    if k == 2:
        return isqrt(n)
    x = 1 << (-(-n.bit_length() // k))  # upper-ish initial guess
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    return x


def rational_root_interval(r: RationalLike, k: int, width: Fraction) -> Interval:
    """Enclosure of r**(1/k) for rational r >= 0, hi - lo <= width.

    Exact k-th powers come back as point intervals, so rational quantities
    dressed up as roots lose nothing.
    """
    r = Fraction(r)
    if r < 0:
        raise ValueError("root of negative rational")
    if width <= 0:
        raise ValueError("width must be positive")
    if r == 0:
        return Interval.point(0)
    if k == 1:
        return Interval.point(r)
    p, q = r.numerator, r.denominator
    n = p * q ** (k - 1)  # r = n / q**k
    t = iroot(n, k)
    if t**k == n:
        return Interval.point(Fraction(t, q))
    # scale so the integer root gives endpoints 1/(q*2^m) apart
    need = -(-width.denominator // (q * width.numerator))
    m = max(1, (need - 1).bit_length() if need > 1 else 1)
    b = 1 << m
    s = iroot(n * b**k, k)
    return Interval(Fraction(s, q * b), Fraction(s + 1, q * b))


def rational_sqrt_interval(r: RationalLike, width: Fraction) -> Interval:
    return rational_root_interval(r, 2, width)


def interval_sqrt(iv: Interval, width: Fraction) -> Interval:
    """Enclosure of sqrt over a non-negative interval."""
    if iv.lo < 0:
        raise ValueError("interval_sqrt needs a non-negative interval")
    half = width / 2
    lo = rational_sqrt_interval(iv.lo, half).lo
    hi = rational_sqrt_interval(iv.hi, half).hi
    return Interval(lo, hi)


# ---------------------------------------------------------------------------
# rectangular complex enclosures
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class ComplexEnclosure:
    """Axis-aligned rectangle enclosing one complex value."""

    re: Interval
    im: Interval

    @staticmethod
    def exact(z: GaussianRational) -> "ComplexEnclosure":
        return ComplexEnclosure(Interval.point(z.re), Interval.point(z.im))

    def __add__(self, o: "ComplexEnclosure") -> "ComplexEnclosure":
        return ComplexEnclosure(self.re + o.re, self.im + o.im)

    def __sub__(self, o: "ComplexEnclosure") -> "ComplexEnclosure":
        return ComplexEnclosure(self.re - o.re, self.im - o.im)

    def __neg__(self) -> "ComplexEnclosure":
        return ComplexEnclosure(-self.re, -self.im)

    def __mul__(self, o: "ComplexEnclosure") -> "ComplexEnclosure":
        return ComplexEnclosure(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    def conjugate(self) -> "ComplexEnclosure":
        return ComplexEnclosure(self.re, -self.im)

    def normsq(self) -> Interval:
        return self.re.square() + self.im.square()

    def contains_zero(self) -> bool:
        return self.re.contains(0) and self.im.contains(0)

    def __truediv__(self, o: "ComplexEnclosure") -> "ComplexEnclosure":
        n = o.normsq()
        if n.lo <= 0:
            raise ZeroDivisionError("complex interval divisor may contain zero")
        num = self * o.conjugate()
        return ComplexEnclosure(num.re / n, num.im / n)

    def contains(self, z: GaussianRational) -> bool:
        return self.re.contains(z.re) and self.im.contains(z.im)

    def abs(self, width: Fraction) -> Interval:
        """Enclosure of |z| over the rectangle."""
        nsq = self.normsq()
        return interval_sqrt(nsq, width)

    def scale(self, c: RationalLike) -> "ComplexEnclosure":
        return ComplexEnclosure(self.re * c, self.im * c)


# ---------------------------------------------------------------------------
# operator 1-norm (max column sum of entry moduli)
# ---------------------------------------------------------------------------

def _entry_abs(a: GaussianRational, width: Fraction) -> Interval:
    if not a.im:
        return Interval.point(abs(a.re))
    if not a.re:
        return Interval.point(abs(a.im))
    return rational_sqrt_interval(a.normsq(), width)


def op1_norm(A: RMatrix, width: Fraction) -> Interval:
    """Certified enclosure of max_j sum_i |A_ij| with hi - lo <= width.

    For matrices with real (or purely imaginary) rational entries the entry
    moduli are exact and the enclosure degenerates to a point.
    """
    if width <= 0:
        raise ValueError("width must be positive")
    per_entry = width / A.k
    best: Interval | None = None
    for j in range(A.k):
        col = interval_sum(_entry_abs(A.rows[i][j], per_entry) for i in range(A.k))
        best = col if best is None else best.max_with(col)
    assert best is not None
    return best


def op1_norm_enclosure_matrix(
    entries: tuple[tuple[ComplexEnclosure, ...], ...], width: Fraction
) -> Interval:
    """Operator 1-norm enclosure for a matrix of complex enclosures."""
    k = len(entries)
    per_entry = width / k
    best: Interval | None = None
    for j in range(k):
        col = interval_sum(entries[i][j].abs(per_entry) for i in range(k))
        best = col if best is None else best.max_with(col)
    assert best is not None
    return best


# ---------------------------------------------------------------------------
# certified comparisons with refinement
# ---------------------------------------------------------------------------

IntervalFn = Callable[[Fraction], Interval]

_REFINE_START = Fraction(1, 2**16)
_REFINE_STEP = 2**12


def certify_le(
    a: IntervalFn,
    b: IntervalFn,
    slack: Fraction = Fraction(0),
    floor: Fraction | None = None,
) -> bool:
    """Decide "value(a) <= value(b) + slack" by refining both enclosures.

    Returns True when a.hi <= b.lo + slack at some width, False when
    a.lo > b.hi + slack, and raises Unresolved when the floor width cannot
    separate the two (possible only when the true gap is within slack of 0).
    """
    floor = enclosure_floor() if floor is None else floor
    w = _REFINE_START
    while True:
        ia, ib = a(w), b(w)
        if ia.hi <= ib.lo + slack:
            return True
        if ia.lo > ib.hi + slack:
            return False
        if w <= floor:
            raise Unresolved(
                f"cannot decide {ia} <= {ib} + {slack} at floor width {floor}"
            )
        w = max(floor, w / _REFINE_STEP)


def certify_sign(fn: IntervalFn, floor: Fraction | None = None) -> int:
    """Certified sign of an enclosed value: -1, 0 (exact point), or +1."""
    floor = enclosure_floor() if floor is None else floor
    w = _REFINE_START
    while True:
        iv = fn(w)
        if iv.lo > 0:
            return 1
        if iv.hi < 0:
            return -1
        if iv.lo == iv.hi == 0:
            return 0
        if w <= floor:
            raise Unresolved(f"sign of {iv} undecided at floor width {floor}")
        w = max(floor, w / _REFINE_STEP)
