"""Exterior-algebra arithmetic: pinned examples plus randomized axioms."""

import random

import pytest

from helpers import as_tuple_terms, bubble_wedge, random_class
from thomstem.exterior import (ExteriorClass, Monomial, RankMismatchError,
                               add, mod2, scale, sq_torus, top_coefficient,
                               wedge)


def gen(k, rank=4):
    return ExteriorClass.generator(k, rank)


class TestWedge:
    def test_adjacent_merge(self):
        assert gen(1).wedge(gen(2)) == ExteriorClass.monomial([1, 2], 4)

    def test_exterior_square(self):
        assert gen(1).wedge(gen(1)).is_zero

    def test_one_transposition(self):
        assert gen(2).wedge(gen(1)) == ExteriorClass.monomial([1, 2], 4, coeff=-1)

    def test_rank_mismatch(self):
        with pytest.raises(RankMismatchError):
            gen(1, 4).wedge(gen(1, 5))

    def test_unit(self):
        x = ExteriorClass.monomial([2, 3], 4, coeff=7)
        assert ExteriorClass.unit(4).wedge(x) == x
        assert x.wedge(ExteriorClass.unit(4)) == x


class TestModuleOps:
    def test_add_cancels(self):
        assert add(gen(1), gen(1).scale(-1)).is_zero

    def test_scale(self):
        assert scale(2, ExteriorClass.monomial([1, 2], 4)) == \
            ExteriorClass.monomial([1, 2], 4, coeff=2)

    def test_add_two_terms(self):
        s = add(ExteriorClass.monomial([1, 2], 4),
                ExteriorClass.monomial([3, 4], 4))
        assert as_tuple_terms(s) == {(1, 2): 1, (3, 4): 1}

    def test_modulus_mixing_rejected(self):
        with pytest.raises(ValueError):
            gen(1).add(gen(1).mod2())


class TestMod2:
    def test_even_coefficient_dies(self):
        assert mod2(ExteriorClass.monomial([1, 2], 4, coeff=2)).is_zero

    def test_odd_coefficient_normalizes(self):
        reduced = mod2(ExteriorClass.monomial([1, 2], 4, coeff=3))
        assert as_tuple_terms(reduced) == {(1, 2): 1}
        assert reduced.modulus == 2

    def test_odd_volume_pair(self):
        # both determinants odd: the reduction keeps both volume classes
        vols = ExteriorClass({(1, 2, 3, 4): 3, (5, 6, 7, 8): 5}, 8)
        assert as_tuple_terms(mod2(vols)) == {(1, 2, 3, 4): 1, (5, 6, 7, 8): 1}


class TestSq:
    def test_sq0_is_identity(self):
        x = ExteriorClass.monomial([1, 2], 4, modulus=2)
        assert sq_torus(0, x) == x

    def test_sq1_vanishes(self):
        assert sq_torus(1, ExteriorClass.generator(1, 4, modulus=2)).is_zero

    def test_sq2_vanishes_on_top(self):
        top = ExteriorClass.monomial([1, 2, 3, 4], 4, modulus=2)
        assert sq_torus(2, top).is_zero

    def test_negative_degree_rejected(self):
        with pytest.raises(ValueError):
            sq_torus(-1, ExteriorClass.unit(4, modulus=2))


class TestTopCoefficient:
    def test_full_monomial(self):
        assert top_coefficient(ExteriorClass.monomial([1, 2, 3, 4], 4, coeff=5)) == 5

    def test_missing_full_monomial(self):
        assert top_coefficient(ExteriorClass.monomial([1, 2], 4)) == 0

    def test_volume_product_on_rank_eight(self):
        vol1 = ExteriorClass.monomial([1, 2, 3, 4], 8)
        vol2 = ExteriorClass.monomial([5, 6, 7, 8], 8)
        assert top_coefficient(vol1.wedge(vol2)) == 1


class TestMonomial:
    def test_indices_roundtrip(self):
        m = Monomial.from_indices([2, 5, 7])
        assert m.indices == (2, 5, 7)
        assert m.degree == 3

    def test_repeated_index_rejected(self):
        with pytest.raises(ValueError):
            Monomial.from_indices([1, 1])


class TestRandomizedAxioms:
    """Algebra axioms over seeded random classes, rank <= 8."""

    def test_wedge_matches_bubble_oracle(self):
        rng = random.Random(20260810)
        for _ in range(400):
            rank = rng.randint(0, 8)
            a = random_class(rng, rank)
            b = random_class(rng, rank)
            got = as_tuple_terms(a.wedge(b))
            want = bubble_wedge(as_tuple_terms(a), as_tuple_terms(b))
            assert got == want

    def test_associative_and_bilinear(self):
        rng = random.Random(7)
        for _ in range(300):
            rank = rng.randint(0, 8)
            a, b, c = (random_class(rng, rank) for _ in range(3))
            assert a.wedge(b).wedge(c) == a.wedge(b.wedge(c))
            assert a.wedge(b.add(c)) == a.wedge(b).add(a.wedge(c))
            n = rng.randint(-5, 5)
            assert a.wedge(b.scale(n)) == a.wedge(b).scale(n)

    def test_graded_commutativity(self):
        rng = random.Random(11)
        for _ in range(300):
            rank = rng.randint(1, 8)
            da = rng.randint(0, rank)
            db = rng.randint(0, rank)
            a = random_class(rng, rank, degree=da)
            b = random_class(rng, rank, degree=db)
            sign = -1 if (da * db) % 2 else 1
            assert a.wedge(b) == b.wedge(a).scale(sign)

    def test_odd_degree_squares_vanish(self):
        rng = random.Random(13)
        for _ in range(200):
            rank = rng.randint(1, 8)
            deg = rng.choice([d for d in range(1, rank + 1) if d % 2 == 1])
            a = random_class(rng, rank, degree=deg)
            assert a.wedge(a).is_zero

    def test_mod2_is_a_ring_morphism(self):
        rng = random.Random(17)
        for _ in range(300):
            rank = rng.randint(0, 8)
            a = random_class(rng, rank)
            b = random_class(rng, rank)
            assert mod2(a.wedge(b)) == mod2(a).wedge(mod2(b))

    def test_cartan_formula_is_vacuous(self):
        rng = random.Random(19)
        for _ in range(100):
            rank = rng.randint(0, 6)
            x = random_class(rng, rank, modulus=2)
            y = random_class(rng, rank, modulus=2)
            for n in (1, 2, 3):
                lhs = sq_torus(n, x.wedge(y))
                rhs = ExteriorClass.zero(rank, 2)
                for i in range(n + 1):
                    rhs = rhs.add(sq_torus(i, x).wedge(sq_torus(n - i, y)))
                assert lhs == rhs
                assert lhs.is_zero
