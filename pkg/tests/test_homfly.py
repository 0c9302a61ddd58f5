"""
Tests for the skein engine and the two-strand recursion matrix
"""
import random

import pytest

from app.algebra.cyclo import CyclotomicNumber, zeta_twist_value
from app.algebra.poly import A, Z, CoefficientRing, LaurentPoly1, LaurentPoly2, specialize_z
from app.core.cache import SkeinCache
from app.core.config import Settings
from app.core.exceptions import DomainError, ResourceCapExceeded
from app.knots.braid import BraidWord, braid_to_diagram, parse_braid
from app.knots.homfly import (
    DELTA,
    conway,
    homfly,
    homfly_of_braid,
    twist_matrix_power,
    two_strand_homfly,
    unlink_value,
)

A_INV = LaurentPoly2.monomial(1, -1, 0)


def P(text: str) -> LaurentPoly2:
    return homfly_of_braid(parse_braid(text))


class TestKnownValues:
    """Hand-checked HOMFLY polynomials"""

    def test_unknot(self):
        assert P("").is_one()
        assert P("1").is_one()
        assert P("-1 2 -3").is_one()

    def test_unlinks(self):
        assert P("1 -1") == DELTA
        assert P("3:") == DELTA ** 2
        assert unlink_value(3) == DELTA ** 2

    def test_unlink_needs_a_component(self):
        with pytest.raises(DomainError):
            unlink_value(0)

    def test_trefoil(self, trefoil):
        assert P("1 1 1") == trefoil

    def test_mirror_trefoil(self):
        assert P("-1 -1 -1") == LaurentPoly2({(-2, 0): 2, (-4, 0): -1, (-2, 2): 1})

    def test_figure_eight(self, figure_eight):
        assert P("1 -2 1 -2") == figure_eight

    def test_negative_hopf_link(self):
        assert A * Z * P("-1 -1") == LaurentPoly2({(-2, 0): 1, (0, 0): -1, (0, 2): -1})

    def test_cinquefoil(self):
        expected = LaurentPoly2({(4, 0): 3, (6, 0): -2, (4, 2): 4, (6, 2): -1, (4, 4): 1})
        assert P("1 1 1 1 1") == expected

    def test_conway_of_figure_eight(self):
        assert conway(braid_to_diagram(parse_braid("1 -2 1 -2"))) == LaurentPoly1({0: 1, 2: -1})


class TestInvariance:
    """The value depends only on the closed link"""

    def test_stabilization(self, trefoil):
        assert P("3:1 1 1 2") == trefoil
        assert P("3:1 1 1 -2") == trefoil

    def test_conjugation(self, figure_eight):
        assert P("-2 1 -2 1") == figure_eight
        assert P("2 1 -2 1 -2 -2") == figure_eight

    def test_skein_relation_on_random_words(self):
        rng = random.Random(7)
        for _ in range(25):
            strands = rng.randint(2, 4)
            word = [rng.choice((1, -1)) * rng.randint(1, strands - 1) for _ in range(rng.randint(0, 5))]
            pos = rng.randint(0, len(word))
            g = rng.randint(1, strands - 1)
            plus = homfly_of_braid(BraidWord(strands, tuple(word[:pos] + [g] + word[pos:])))
            minus = homfly_of_braid(BraidWord(strands, tuple(word[:pos] + [-g] + word[pos:])))
            zero = homfly_of_braid(BraidWord(strands, tuple(word)))
            assert A_INV * plus - A * minus == Z * zero, f"skein relation fails for {word} at {pos}"


class TestResourceCap:

    def test_cap_is_enforced(self):
        with pytest.raises(ResourceCapExceeded) as exc_info:
            homfly(braid_to_diagram(parse_braid("1 1 1 1 1")), crossing_cap=4)
        assert "too large" in str(exc_info.value)

    def test_cap_at_the_boundary(self, trefoil):
        assert homfly(braid_to_diagram(parse_braid("1 1 1")), crossing_cap=3) == trefoil


class TestSkeinCache:
    """The memo never changes a value"""

    def test_cached_and_uncached_agree(self, figure_eight):
        cache = SkeinCache()
        d = braid_to_diagram(parse_braid("1 -2 1 -2"))
        first = homfly(d, cache=cache)
        second = homfly(d, cache=cache)
        assert first == second == figure_eight
        assert cache.stats()["hits"] >= 1

    def test_disabled_cache(self, trefoil):
        cache = SkeinCache(Settings(SKEIN_CACHE_ENABLED=False))
        assert homfly(braid_to_diagram(parse_braid("1 1 1")), cache=cache) == trefoil
        assert cache.stats()["entries"] == 0


class TestTwistMatrix:
    """M = [[0, 1], [a^2, a z]] moves two-strand twist regions"""

    @pytest.mark.parametrize("m", range(-4, 8))
    def test_matches_the_skein_engine(self, m):
        letter = 1 if m > 0 else -1
        assert two_strand_homfly(m) == homfly_of_braid(BraidWord(2, (letter,) * abs(m)))

    @pytest.mark.parametrize("k", [3, 4, 5, 6, 7])
    def test_power_2k_is_scalar(self, k):
        ring = CoefficientRing.cyclotomic(2 * k)
        _, z_k = zeta_twist_value(k)
        a_2k = LaurentPoly1.monomial(1, 2 * k, var="a", ring=ring)
        assert twist_matrix_power(2 * k, ring, z_k).is_scalar(a_2k)

    def test_trace_and_determinant(self):
        ring = CoefficientRing.cyclotomic(10)
        _, z_5 = zeta_twist_value(5)
        M = twist_matrix_power(1, ring, z_5)
        assert M.trace() == LaurentPoly1.monomial(z_5, 1, var="a", ring=ring)
        assert M.det() == LaurentPoly1.monomial(-1, 2, var="a", ring=ring)

    def test_k2_fourth_power_over_gaussian_integers(self):
        ring = CoefficientRing.cyclotomic(4)
        i = CyclotomicNumber.zeta(4)
        (p, q), (r, s) = twist_matrix_power(4, ring, i * 2).entries
        assert p == LaurentPoly1.monomial(-3, 4, var="a", ring=ring)
        assert q == LaurentPoly1.monomial(i * -4, 3, var="a", ring=ring)
        assert r == LaurentPoly1.monomial(i * -4, 5, var="a", ring=ring)
        assert s == LaurentPoly1.monomial(5, 4, var="a", ring=ring)

    def test_k2_fourth_power_is_scalar_mod_4(self):
        ring = CoefficientRing.cyclotomic(4, modulus=4)
        z = CyclotomicNumber(4, (0, 2), 4)
        assert twist_matrix_power(4, ring, z).is_scalar(LaurentPoly1.monomial(1, 4, var="a", ring=ring))

    def test_k2_fourth_power_at_z4(self):
        ring = CoefficientRing.cyclotomic(8)
        _, z_4 = zeta_twist_value(4)
        M = twist_matrix_power(4, ring, z_4)
        assert M.is_scalar(LaurentPoly1.monomial(-1, 4, var="a", ring=ring))
        assert not M.is_scalar(LaurentPoly1.monomial(1, 4, var="a", ring=ring))

    def test_inverse_base(self):
        assert (twist_matrix_power(-3) @ twist_matrix_power(3)).is_scalar(LaurentPoly2.constant(1))

    def test_specialized_matrix_needs_a_z_value(self):
        with pytest.raises(DomainError):
            twist_matrix_power(2, CoefficientRing.cyclotomic(6))

    def test_twist_move_multiplies_by_a_power(self):
        ring = CoefficientRing.cyclotomic(6)
        _, z_3 = zeta_twist_value(3)
        before = specialize_z(two_strand_homfly(3), z_3, ring)
        after = specialize_z(two_strand_homfly(9), z_3, ring)
        assert after == before * LaurentPoly1.monomial(1, 6, var="a", ring=ring)
