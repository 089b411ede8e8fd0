"""Finite-set ring operations over exact quaternions and matrices.

Sumsets and productsets are computed with exact dedup; the ratio profile
records, for every element x of the ratioset A/A = AA^-1 intersect A^-1A, the
left multiplicity l(x) = #{(a,b) : a b^-1 = x} and the right multiplicity
r(x) = #{(c,d) : c^-1 d = x}.  Multiplicative energy, the number of
quadruples (a,b,c,d) with ca = db, equals sum over x of l(x) r(x); the module
carries both the profile-based method and a literal quadruple-loop oracle and
the two are required to agree exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Union

from sumprod.exactnum import (
    RMatrix,
    RQuaternion,
    matrix_det,
    matrix_from_json,
    matrix_to_json,
    parse_quaternion,
)

Element = Union[RQuaternion, RMatrix]

KIND_QUATERNION = "quaternion"
KIND_MATRIX = "matrix"


class NonInvertibleElement(ValueError):
    """A ratio/energy operation met an element without an inverse."""


@dataclass(frozen=True)
class ElementSet:
    """Deduplicated, deterministically ordered finite set of ring elements.

    Invertibility of every element is demanded by the multiplicative
    operations (ratio profile, energy, pipeline), not at construction time:
    derived sets such as A+A may legitimately contain zero or singular sums.
    """

    kind: str
    k: int | None
    elements: tuple[Element, ...]

    @staticmethod
    def of(elements: Iterable[Element]) -> "ElementSet":
        dedup = {e: None for e in elements}
        if not dedup:
            raise ValueError("empty element set")
        ordered = tuple(sorted(dedup, key=lambda e: e.sort_key()))
        first = ordered[0]
        if isinstance(first, RQuaternion):
            if not all(isinstance(e, RQuaternion) for e in ordered):
                raise TypeError("mixed element kinds")
            return ElementSet(KIND_QUATERNION, None, ordered)
        k = first.k
        if not all(isinstance(e, RMatrix) and e.k == k for e in ordered):
            raise TypeError("mixed element kinds or dimensions")
        return ElementSet(KIND_MATRIX, k, ordered)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Element]:
        return iter(self.elements)

    def __contains__(self, e: Element) -> bool:
        return e in set(self.elements)

    def is_quaternion(self) -> bool:
        return self.kind == KIND_QUATERNION

    def require_invertible(self) -> None:
        for e in self.elements:
            if isinstance(e, RQuaternion):
                if e.is_zero():
                    raise NonInvertibleElement("set contains 0")
            elif matrix_det(e).is_zero():
                raise NonInvertibleElement("set contains a singular matrix")

    def without_zero(self) -> tuple["ElementSet | None", int]:
        """Drop the zero element (quaternion sets); returns (set, #dropped)."""
        if not self.is_quaternion():
            return self, 0
        kept = [e for e in self.elements if not e.is_zero()]
        dropped = len(self.elements) - len(kept)
        if not kept:
            return None, dropped
        if not dropped:
            return self, 0
        return ElementSet.of(kept), dropped


def sumset(A: ElementSet) -> ElementSet:
    """A + A, all pairwise sums a + b (including a + a), deduplicated."""
    elems = A.elements
    out = {}
    for i, a in enumerate(elems):
        for b in elems[i:]:
            out[a + b] = None
    return ElementSet.of(out)


def productset(A: ElementSet) -> ElementSet:
    """AA, all ordered products ab (both orders; multiplication may not commute)."""
    out = {}
    for a in A.elements:
        for b in A.elements:
            out[a * b] = None
    return ElementSet.of(out)


# ---------------------------------------------------------------------------
# ratio profile and multiplicative energy
# ---------------------------------------------------------------------------

SIDE_LEFT = "left"
SIDE_RIGHT = "right"


def pair_ratio(num: Element, den_inv: Element, side: str) -> Element:
    """Ratio of an ordered pair given the precomputed denominator inverse.

    side=left  -> num * den^-1   (so counts of x are l(x))
    side=right -> den^-1 * num   (so counts of x are r(x))
    """
    if side == SIDE_LEFT:
        return num * den_inv
    return den_inv * num


def ratio_pairs(A: ElementSet, side: str) -> dict[Element, list[tuple[Element, Element]]]:
    """Map ratio x -> list of ordered (numerator, denominator) pairs."""
    A.require_invertible()
    inverses = {e: e.inverse() for e in A.elements}
    table: dict[Element, list[tuple[Element, Element]]] = {}
    for num in A.elements:
        for den in A.elements:
            x = pair_ratio(num, inverses[den], side)
            table.setdefault(x, []).append((num, den))
    return table


@dataclass(frozen=True)
class RatioProfile:
    """Left/right representation counts over the ratioset AA^-1 ∩ A^-1A.

    `left_counts` covers all of AA^-1 and `right_counts` all of A^-1A (each
    sums to |A|^2); `entries` is their intersection with the (l, r) pairs.
    """

    entries: dict[Element, tuple[int, int]]
    left_counts: dict[Element, int]
    right_counts: dict[Element, int]
    set_size: int

    def energy(self) -> int:
        return sum(l * r for l, r in self.entries.values())

    def multiplicity(self, x: Element, side: str) -> int:
        l, r = self.entries[x]
        return l if side == SIDE_LEFT else r


def ratio_profile(A: ElementSet) -> RatioProfile:
    left = {x: len(p) for x, p in ratio_pairs(A, SIDE_LEFT).items()}
    right = {x: len(p) for x, p in ratio_pairs(A, SIDE_RIGHT).items()}
    entries = {
        x: (l, right[x])
        for x, l in sorted(left.items(), key=lambda kv: kv[0].sort_key())
        if x in right
    }
    return RatioProfile(entries, left, right, len(A))


@dataclass(frozen=True)
class EnergyResult:
    value: int
    method: str


def energy(A: ElementSet, method: str = "fast") -> EnergyResult:
    """Multiplicative energy |{(a,b,c,d) in A^4 : ca = db}|.

    fast:  sum of l(x) r(x) over the ratioset, O(|A|^2) pair scans.
    brute: literal quadruple loop over precomputed exact products.
    """
    if method == "fast":
        return EnergyResult(ratio_profile(A).energy(), "fast")
    if method != "brute":
        raise ValueError(f"unknown energy method {method!r}")
    A.require_invertible()
    elems = A.elements
    n = len(elems)
    prod = [[(elems[i] * elems[j]) for j in range(n)] for i in range(n)]
    ids: dict[Element, int] = {}
    prod_id = [[ids.setdefault(prod[i][j], len(ids)) for j in range(n)]
               for i in range(n)]
    count = 0
    rng = range(n)
    for c in rng:
        row_c = prod_id[c]
        for a in rng:
            ca = row_c[a]
            for d in rng:
                row_d = prod_id[d]
                for b in rng:
                    if ca == row_d[b]:
                        count += 1
    return EnergyResult(count, "brute")


def cauchy_schwarz_check(A: ElementSet) -> tuple[int, Fraction, bool]:
    """E(A) >= |A|^4 / |AA|; returns (E, bound, holds). Holds always."""
    e = energy(A, "fast").value
    aa = len(productset(A))
    bound = Fraction(len(A) ** 4, aa)
    return e, bound, Fraction(e) >= bound


# ---------------------------------------------------------------------------
# hexadecants
# ---------------------------------------------------------------------------

def sign_pattern(q: RQuaternion) -> str:
    """Coordinatewise sign pattern, zero treated as non-negative."""
    return "".join("+" if c >= 0 else "-" for c in q.coords())


def same_hexadecant(p: RQuaternion, q: RQuaternion) -> bool:
    """True when each coordinate pair is all non-negative or all non-positive."""
    return all(a * b >= 0 for a, b in zip(p.coords(), q.coords()))


def hexadecant_partition(A: ElementSet) -> list[ElementSet]:
    """Partition A \\ {0} into sign-pattern classes, largest first.

    The zero quaternion belongs to no class; ties between equal-sized classes
    break on the pattern string so the output is deterministic.
    """
    if not A.is_quaternion():
        raise TypeError("hexadecant partition is defined for quaternion sets")
    groups: dict[str, list[RQuaternion]] = {}
    for q in A.elements:
        if q.is_zero():
            continue
        groups.setdefault(sign_pattern(q), []).append(q)
    ordered = sorted(groups.items(), key=lambda kv: (-len(kv[1]), kv[0]))
    return [ElementSet.of(qs) for _, qs in ordered]


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------

def set_to_json(A: ElementSet) -> dict:
    header: dict = {"kind": A.kind}
    if A.kind == KIND_MATRIX:
        header["k"] = A.k
    if A.is_quaternion():
        elements = [e.text() for e in A.elements]
    else:
        elements = [matrix_to_json(e) for e in A.elements]
    return {**header, "elements": elements}


def set_from_json(data: dict) -> ElementSet:
    kind = data["kind"]
    if kind == KIND_QUATERNION:
        return ElementSet.of([parse_quaternion(t) for t in data["elements"]])
    if kind == KIND_MATRIX:
        mats = [matrix_from_json(m) for m in data["elements"]]
        got = ElementSet.of(mats)
        if got.k != data["k"]:
            raise ValueError(f"header k={data['k']} but elements have k={got.k}")
        return got
    raise ValueError(f"unknown set kind {kind!r}")


def save_set(A: ElementSet, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(set_to_json(A), fh, indent=2)
        fh.write("\n")


def load_set(path: str) -> ElementSet:
    with open(path, encoding="utf-8") as fh:
        return set_from_json(json.load(fh))


def profile_to_csv(profile: RatioProfile) -> str:
    lines = ["x,l,r"]
    for x, (l, r) in profile.entries.items():
        lines.append(f"{x.text()},{l},{r}")
    return "\n".join(lines) + "\n"
