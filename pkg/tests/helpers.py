"""Shared test oracles, deliberately independent of the library's own paths.

The wedge oracle multiplies index tuples by concatenation and bubble-sorts
with an explicit swap count; the Chern oracle expands exp(Omega) in a flat
symbol algebra with no bitmasks and no Koszul bookkeeping; the assembly
oracle direct-sums stems straight off the cell list.
"""

import random
from fractions import Fraction
from itertools import combinations

from thomstem import stems
from thomstem.exterior import ExteriorClass


# -- wedge oracle: list concatenation + bubble parity --------------------

def bubble_wedge_monomials(t1, t2):
    """Product of two ascending index tuples: (sorted tuple, sign) or
    (None, 0) when a generator repeats."""
    seq = list(t1) + list(t2)
    sign = 1
    changed = True
    while changed:
        changed = False
        for i in range(len(seq) - 1):
            if seq[i] == seq[i + 1]:
                return None, 0
            if seq[i] > seq[i + 1]:
                seq[i], seq[i + 1] = seq[i + 1], seq[i]
                sign = -sign
                changed = True
    return tuple(seq), sign


def bubble_wedge(a_terms, b_terms):
    """Wedge of {index-tuple: coeff} maps via the bubble oracle."""
    out = {}
    for m1, c1 in a_terms.items():
        for m2, c2 in b_terms.items():
            mono, sign = bubble_wedge_monomials(m1, m2)
            if sign == 0:
                continue
            out[mono] = out.get(mono, 0) + sign * c1 * c2
    return {m: c for m, c in out.items() if c}


def as_tuple_terms(cls: ExteriorClass):
    return {mono.indices: coeff for mono, coeff in cls.terms()}


# -- random class generator ----------------------------------------------

def random_class(rng: random.Random, rank: int, max_terms: int = 4,
                 degree=None, modulus: int = 0) -> ExteriorClass:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        if degree is None:
            mask = rng.randrange(1 << rank)
        else:
            if degree > rank:
                continue
            indices = rng.sample(range(1, rank + 1), degree)
            mask = 0
            for k in indices:
                mask |= 1 << (k - 1)
        coeff = rng.randint(-9, 9)
        if coeff:
            terms[mask] = terms.get(mask, 0) + coeff
    terms = {m: c for m, c in terms.items() if c}
    return ExteriorClass(terms, rank, modulus)


# -- brute-force Chern character oracle -----------------------------------

def oracle_chern_character(manifold):
    """exp(Omega) by direct enumeration of all monomial products in a flat
    symbol algebra: symbols ('x', k) < ('t', k) ordered with every x before
    every t, signs by bubble sort, coefficients exact fractions. Returns
    {picard index tuple: integer} maps for degrees 0, 2, 4.
    """
    b = manifold.b1
    omega = {(("x", k), ("t", k)): Fraction(1) for k in range(1, b + 1)}

    def key(sym):
        return (0 if sym[0] == "x" else 1, sym[1])

    def mul(u, v):
        out = {}
        for m1, c1 in u.items():
            for m2, c2 in v.items():
                seq = list(m1) + list(m2)
                sign = 1
                changed = True
                while changed:
                    changed = False
                    for i in range(len(seq) - 1):
                        if seq[i] == seq[i + 1]:
                            sign = 0
                            break
                        if key(seq[i]) > key(seq[i + 1]):
                            seq[i], seq[i + 1] = seq[i + 1], seq[i]
                            sign = -sign
                            changed = True
                    if sign == 0:
                        break
                if sign == 0:
                    continue
                mono = tuple(seq)
                out[mono] = out.get(mono, 0) + sign * c1 * c2
        return {m: c for m, c in out.items() if c}

    total = {(): Fraction(1)}
    power = {(): Fraction(1)}
    factorial = 1
    for j in range(1, 5):
        power = mul(power, omega)
        factorial *= j
        for mono, coeff in power.items():
            total[mono] = total.get(mono, Fraction(0)) + coeff / factorial

    by_degree = {0: {}, 2: {}, 4: {}}
    for mono, coeff in total.items():
        xs = tuple(k for kind, k in mono if kind == "x")
        ts = tuple(k for kind, k in mono if kind == "t")
        if len(xs) != 4:
            continue  # fiber integration kills every other X-degree
        weight = coeff * manifold.quad(xs)
        if not weight:
            continue
        assert weight.denominator == 1, "oracle hit a fractional coefficient"
        deg = len(ts)
        if deg in by_degree:
            by_degree[deg][ts] = by_degree[deg].get(ts, 0) + int(weight)
    return {d: {m: c for m, c in terms.items() if c}
            for d, terms in by_degree.items()}


# -- assembly oracle -------------------------------------------------------

def direct_sum_oracle(complex_, target_n):
    """Direct sum of stems over proper cells, no differentials at all."""
    total = stems.TRIVIAL_GROUP
    for cell in complex_.proper_cells:
        total = total + stems.stem_group(cell.dim - target_n)
    return total


def binomial(n, k):
    if k < 0 or k > n:
        return 0
    return len(list(combinations(range(n), k))) if n <= 12 else _binom(n, k)


def _binom(n, k):
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out
