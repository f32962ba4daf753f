"""Manifold bookkeeping and the characteristic classes of the index bundle.

A 4-manifold enters purely algebraically: the rank of H^1, the quadruple
cup-product form, the signature and b+. The curvature class of the
universal line bundle lives in a bigraded exterior algebra (manifold
generators x Picard-torus generators); exponentiating it with exact
fractions and integrating over the manifold gives the Chern character of
the Dirac index bundle, which is then packaged as a rank-1 quaternionic
bundle over the Picard torus.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Tuple

from ._backend import kernel_for_rank
from .exterior import ExteriorClass

QUATERNIONIC = "quaternionic"
REAL = "real"

# The quadruple-product sign is pinned to the positive interleaving
# permutation; only mod-2 values feed the Steenrod detections downstream,
# so the open +/- choice never changes a verdict. Reports quote this.
SIGN_CONVENTION_NOTE = (
    "sign convention: c2 = -ch2 with the positive interleaving-permutation "
    "sign; only mod-2 values feed Sq detection, so the open +/- choice never "
    "affects verdicts")


@dataclass(frozen=True)
class ManifoldData:
    """Algebraic stand-in for a spin 4-manifold (or a connected sum).

    quad_form maps ascending 4-subsets of {1..b1} to the integer value of
    the quadruple cup product on the corresponding H^1 basis elements.
    """

    b1: int
    quad_form: Mapping[Tuple[int, int, int, int], int]
    signature: int = 0
    b_plus: int = 3
    label: str = "M"

    def __post_init__(self):
        if self.b1 < 0:
            raise ValueError("b1 must be nonnegative")
        clean: Dict[Tuple[int, ...], int] = {}
        for key, value in self.quad_form.items():
            subset = tuple(key)
            if len(subset) != 4 or list(subset) != sorted(set(subset)):
                raise ValueError(f"quad_form key {key} is not an ascending 4-subset")
            if not all(1 <= k <= self.b1 for k in subset):
                raise ValueError(f"quad_form key {key} exceeds b1 = {self.b1}")
            if value:
                clean[subset] = value
        if self.b1 < 4 and clean:
            raise ValueError("b1 < 4 forces an empty quadruple form")
        object.__setattr__(self, "quad_form", clean)

    def quad(self, subset: Tuple[int, ...]) -> int:
        return self.quad_form.get(tuple(subset), 0)


def make_homology_torus(determinant: int, label: str = None) -> ManifoldData:
    """A homology 4-torus: b1 = 4, signature 0, b+ = 3, given determinant."""
    if determinant == 0:
        raise ValueError("determinant must be nonzero (degenerate cup form)")
    return ManifoldData(
        b1=4,
        quad_form={(1, 2, 3, 4): determinant},
        signature=0,
        b_plus=3,
        label=label or f"T(det={determinant})",
    )


def connected_sum(m1: ManifoldData, m2: ManifoldData) -> ManifoldData:
    """Block sum: generators of m2 are shifted past those of m1; mixed
    4-subsets carry no quadruple product."""
    shift = m1.b1
    quad = dict(m1.quad_form)
    for subset, value in m2.quad_form.items():
        quad[tuple(k + shift for k in subset)] = value
    return ManifoldData(
        b1=m1.b1 + m2.b1,
        quad_form=quad,
        signature=m1.signature + m2.signature,
        b_plus=m1.b_plus + m2.b_plus,
        label=f"{m1.label} # {m2.label}",
    )


class BigradedClass:
    """Element of the tensor of two exterior algebras: manifold generators
    (degree counted as X-degree, capped at 4) against Picard generators.

    Terms are stored in the canonical split form (x-monomial, t-monomial)
    with rational coefficients; products track the Koszul sign for moving
    t-factors past x-factors. X-degrees above 4 vanish on a 4-manifold and
    are pruned eagerly.
    """

    __slots__ = ("rank", "terms")

    def __init__(self, rank: int, terms: Mapping[Tuple[int, int], Fraction] = ()):
        self.rank = rank
        clean: Dict[Tuple[int, int], Fraction] = {}
        for (xm, tm), coeff in dict(terms).items():
            if xm.bit_count() > 4:
                continue
            c = Fraction(coeff)
            if c:
                clean[(xm, tm)] = c
        self.terms = clean

    @classmethod
    def unit(cls, rank: int) -> "BigradedClass":
        return cls(rank, {(0, 0): Fraction(1)})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def add(self, other: "BigradedClass") -> "BigradedClass":
        out = dict(self.terms)
        for key, c in other.terms.items():
            v = out.get(key, Fraction(0)) + c
            if v:
                out[key] = v
            elif key in out:
                del out[key]
        return BigradedClass(self.rank, out)

    def scale(self, c) -> "BigradedClass":
        c = Fraction(c)
        return BigradedClass(self.rank, {k: c * v for k, v in self.terms.items()})

    def mul(self, other: "BigradedClass") -> "BigradedClass":
        kern = kernel_for_rank(self.rank)
        out: Dict[Tuple[int, int], Fraction] = {}
        for (x1, t1), c1 in self.terms.items():
            t1_deg = t1.bit_count()
            for (x2, t2), c2 in other.terms.items():
                if x1 & x2 or t1 & t2:
                    continue
                xm = x1 | x2
                if xm.bit_count() > 4:
                    continue
                sign = kern.merge_sign(x1, x2) * kern.merge_sign(t1, t2)
                if (t1_deg * x2.bit_count()) & 1:
                    sign = -sign
                key = (xm, t1 | t2)
                v = out.get(key, Fraction(0)) + sign * c1 * c2
                if v:
                    out[key] = v
                elif key in out:
                    del out[key]
        return BigradedClass(self.rank, out)

    def exp(self) -> "BigradedClass":
        """exp of a nilpotent class; the X-degree cap truncates the series."""
        total = BigradedClass.unit(self.rank)
        power = BigradedClass.unit(self.rank)
        j = 1
        while True:
            power = power.mul(self)
            if power.is_zero:
                return total
            total = total.add(power.scale(Fraction(1, _factorial(j))))
            j += 1


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def universal_curvature(manifold: ManifoldData) -> BigradedClass:
    """First Chern class of the universal line bundle: sum over generators
    of (manifold 1-class) wedge (dual Picard 1-class)."""
    b = manifold.b1
    terms = {(1 << k, 1 << k): Fraction(1) for k in range(b)}
    return BigradedClass(b, terms)


def fiber_integrate(cls: BigradedClass, manifold: ManifoldData) -> ExteriorClass:
    """Integrate over the manifold: only X-degree-4 terms survive, each
    contributing its quadruple product times the Picard monomial.

    Every surviving coefficient must be an integer (asserted); the
    combinatorics guarantee it because each square (x_k t_k)^2 vanishes.
    """
    out: Dict[int, int] = {}
    for (xm, tm), coeff in cls.terms.items():
        if xm.bit_count() != 4:
            continue
        subset = tuple(k + 1 for k in range(xm.bit_length()) if xm >> k & 1)
        weight = coeff * manifold.quad(subset)
        if not weight:
            continue
        assert weight.denominator == 1, (
            f"fiber integration produced a non-integer coefficient {weight}")
        out[tm] = out.get(tm, 0) + int(weight)
    return ExteriorClass({m: c for m, c in out.items() if c}, manifold.b1)


def chern_character_index(manifold: ManifoldData) -> List[ExteriorClass]:
    """Chern character of the Dirac index bundle over the Picard torus.

    Returns the even-degree pieces [degree 0, degree 2, degree 4] as
    classes on T^{b1}. Requires signature 0 so the A-hat factor is 1.
    """
    if manifold.signature != 0:
        raise ValueError(
            "nonzero signature is unsupported: the A-hat factor is fixed to 1")
    integrated = fiber_integrate(universal_curvature(manifold).exp(), manifold)
    return [integrated.degree_part(d) for d in (0, 2, 4)]


@dataclass(frozen=True)
class BundleData:
    """A vector bundle over T^{base_rank} by rank, coefficient field and
    characteristic classes; w is the Stiefel-Whitney list (w1, w2, ...)."""

    base_rank: int
    field: str
    rank: int
    c1: ExteriorClass
    c2: ExteriorClass
    w: Tuple[ExteriorClass, ...]
    sphere_shift: int

    def __post_init__(self):
        if self.field not in (QUATERNIONIC, REAL):
            raise ValueError(f"unknown coefficient field {self.field!r}")
        if self.field == QUATERNIONIC:
            if len(self.w) != 4:
                raise ValueError("a quaternionic bundle carries w1..w4")
            zero2 = ExteriorClass.zero(self.base_rank, modulus=2)
            if self.w[0] != zero2 or self.w[2] != zero2:
                raise ValueError("w1 and w3 vanish for quaternionic bundles")
            if self.w[1] != self.c1.mod2() or self.w[3] != self.c2.mod2():
                raise ValueError("w2, w4 must be the mod-2 Chern classes")

    def w_class(self, i: int) -> ExteriorClass:
        """w_i as a mod-2 class, zero beyond the stored list."""
        if 1 <= i <= len(self.w):
            return self.w[i - 1]
        return ExteriorClass.zero(self.base_rank, modulus=2)


def index_bundle(manifold: ManifoldData) -> BundleData:
    """The index bundle as a rank-1 quaternionic bundle over T^{b1}:
    c1 = 0, c2 = -ch_2 (degree-4 character part), and a sphere shift n
    solving m - n = -signature/4 with m = 1."""
    ch = chern_character_index(manifold)
    b = manifold.b1
    zero2 = ExteriorClass.zero(b, modulus=2)
    c1 = ExteriorClass.zero(b)
    c2 = ch[2].scale(-1)
    return BundleData(
        base_rank=b,
        field=QUATERNIONIC,
        rank=1,
        c1=c1,
        c2=c2,
        w=(zero2, c1.mod2(), zero2, c2.mod2()),
        sphere_shift=1 + manifold.signature // 4,
    )
