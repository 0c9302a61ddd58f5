"""
Tests for cyclotomic integers and roots of unity in prime fields
"""
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import divisors, totient

from app.algebra.cyclo import (
    CyclotomicNumber,
    cyclotomic_poly,
    dirichlet_primes,
    find_finite_field_root,
    reduce_poly_to_prime_field,
    reduce_to_prime_field,
    zeta_twist_value,
)
from app.algebra.poly import CoefficientRing, LaurentPoly1, LaurentPoly2, specialize_z
from app.core.exceptions import DomainError, PoleError, ResourceCapExceeded, RingMismatchError

small_ints = st.lists(st.integers(-6, 6), min_size=1, max_size=8)


class TestCyclotomicPolynomial:

    @pytest.mark.parametrize(
        "n, coeffs",
        [
            (1, {0: -1, 1: 1}),
            (2, {0: 1, 1: 1}),
            (4, {0: 1, 2: 1}),
            (6, {0: 1, 1: -1, 2: 1}),
            (8, {0: 1, 4: 1}),
            (12, {0: 1, 2: -1, 4: 1}),
        ],
    )
    def test_small_cases(self, n, coeffs):
        assert cyclotomic_poly(n) == LaurentPoly1(coeffs, var="x")

    def test_degree_is_totient(self):
        assert cyclotomic_poly(30).degree() == 8
        assert cyclotomic_poly(13).degree() == 12

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            cyclotomic_poly(0)


class TestCyclotomicNumber:
    """Arithmetic in Z[zeta_n] kept reduced modulo Phi_n"""

    def test_zeta_has_order_n(self):
        for n in (3, 4, 6, 8, 10):
            zeta = CyclotomicNumber.zeta(n)
            assert zeta ** n == 1
            assert all(zeta ** j != 1 for j in range(1, n))

    def test_i_squared(self):
        i = CyclotomicNumber.zeta(4)
        assert i * i == -1

    def test_sum_of_roots_vanishes(self):
        zeta = CyclotomicNumber.zeta(6)
        assert sum((zeta ** j for j in range(6)), CyclotomicNumber.from_int(6, 0)).is_zero()

    @given(small_ints, small_ints, small_ints)
    def test_ring_axioms(self, x, y, z):
        a, b, c = (CyclotomicNumber(10, v) for v in (x, y, z))
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        assert a - a == 0

    def test_unit_inverse(self):
        zeta = CyclotomicNumber.zeta(8)
        assert zeta ** -3 * zeta ** 3 == 1
        assert (-zeta).unit_inverse() == -(zeta ** 7)

    def test_non_unit_inverse_is_a_pole(self):
        with pytest.raises(PoleError):
            CyclotomicNumber.from_int(6, 2).unit_inverse()

    def test_integer_constants_hash_like_ints(self):
        assert hash(CyclotomicNumber.from_int(6, 5)) == hash(5)
        assert CyclotomicNumber.from_int(6, 5) == 5

    def test_mixed_conductors_fail(self):
        with pytest.raises(RingMismatchError):
            CyclotomicNumber.zeta(4) + CyclotomicNumber.zeta(6)

    def test_modulus_reduces_coefficients(self):
        z = CyclotomicNumber(4, (0, 2), 4)
        assert z * z == 0
        assert str(CyclotomicNumber(4, (5, -1), 4)) == "1 + 3*zeta"

    def test_json_identity(self):
        c = CyclotomicNumber(12, (3, 0, -2, 1))
        assert CyclotomicNumber.from_json(12, c.to_json()) == c


class TestZetaTwistValue:

    def test_z_k_is_zeta_minus_inverse(self):
        for k in range(2, 9):
            zeta, z_k = zeta_twist_value(k)
            assert z_k == zeta - zeta ** -1
            assert zeta ** (2 * k) == 1 and zeta ** k == -1

    def test_k2_gives_two_i(self):
        _, z_2 = zeta_twist_value(2)
        assert z_2 == CyclotomicNumber(4, (0, 2))

    def test_rejects_small_k(self):
        with pytest.raises(DomainError):
            zeta_twist_value(1)


class TestFiniteFieldRoot:
    """Roots of unity of order 2k in F_p, p = 1 mod 2k"""

    @pytest.mark.parametrize("k, p, zeta, N", [(3, 7, 3, 5), (2, 5, 2, 4)])
    def test_first_root(self, k, p, zeta, N):
        root = find_finite_field_root(k)
        assert (root.p, root.zeta, root.N) == (p, zeta, N)
        assert root.k == k

    def test_root_has_exact_order(self):
        for k in range(2, 12):
            root = find_finite_field_root(k)
            assert (root.p - 1) % (2 * k) == 0
            assert pow(root.zeta, 2 * k, root.p) == 1
            assert pow(root.zeta, k, root.p) == root.p - 1

    @pytest.mark.parametrize("k, primes", [(3, [7, 13]), (4, [17, 41]), (5, [11, 31])])
    def test_dirichlet_primes(self, k, primes):
        assert [root.p for root in dirichlet_primes(k, 2)] == primes

    def test_search_cap(self):
        with pytest.raises(ResourceCapExceeded):
            find_finite_field_root(3, skip=50, search_cap=3)

    def test_bad_arguments(self):
        with pytest.raises(DomainError):
            find_finite_field_root(1)
        with pytest.raises(DomainError):
            find_finite_field_root(3, skip=-1)


class TestPrimeFieldReduction:

    def test_reduction_is_a_homomorphism(self):
        root = find_finite_field_root(5)
        x = CyclotomicNumber(10, (1, 2, 0, -3))
        y = CyclotomicNumber(10, (0, -1, 4))
        assert reduce_to_prime_field(x * y, root) == reduce_to_prime_field(x, root) * reduce_to_prime_field(y, root) % root.p
        assert reduce_to_prime_field(x + y, root) == (reduce_to_prime_field(x, root) + reduce_to_prime_field(y, root)) % root.p

    def test_z_k_maps_to_N(self):
        for k in range(3, 7):
            root = find_finite_field_root(k)
            _, z_k = zeta_twist_value(k)
            assert reduce_to_prime_field(z_k, root) == root.N

    def test_commutes_with_z_specialization(self, trefoil):
        root = find_finite_field_root(3)
        _, z_3 = zeta_twist_value(3)
        exact = specialize_z(trefoil, z_3, CoefficientRing.cyclotomic(6))
        assert reduce_poly_to_prime_field(exact, root) == specialize_z(trefoil, root.N, CoefficientRing.prime_field(7))

    def test_wrong_conductor(self):
        root = find_finite_field_root(3)
        with pytest.raises(RingMismatchError):
            reduce_to_prime_field(CyclotomicNumber.zeta(8), root)


class TestIdentitySweeps:
    """Identities checked over their whole stated ranges"""

    @pytest.mark.parametrize("k", range(2, 13))
    def test_odd_powers_of_zeta_sum_to_zero(self, k):
        zeta, _ = zeta_twist_value(k)
        total = sum((zeta ** (2 * j + 1) for j in range(k)), CyclotomicNumber.from_int(2 * k, 0))
        assert total.is_zero()
        assert zeta ** k == -1

    def test_degree_is_totient_up_to_60(self):
        for n in range(1, 61):
            assert cyclotomic_poly(n).degree() == totient(n), f"deg Phi_{n}"

    def test_product_over_divisors_up_to_30(self):
        for n in range(1, 31):
            product = LaurentPoly1.constant(1, var="x")
            for d in divisors(n):
                product = product * cyclotomic_poly(d)
            assert product == LaurentPoly1({0: -1, n: 1}, var="x"), f"n={n}"

    @pytest.mark.parametrize("k", range(3, 9))
    def test_reduction_homomorphism_on_random_pairs(self, k):
        rng = random.Random(1000 + k)
        root = find_finite_field_root(k)
        n = 2 * k
        for _ in range(100):
            x = CyclotomicNumber(n, [rng.randint(-9, 9) for _ in range(rng.randint(1, n))])
            y = CyclotomicNumber(n, [rng.randint(-9, 9) for _ in range(rng.randint(1, n))])
            rx, ry = reduce_to_prime_field(x, root), reduce_to_prime_field(y, root)
            assert reduce_to_prime_field(x * y, root) == rx * ry % root.p, f"{x} * {y}"
            assert reduce_to_prime_field(x + y, root) == (rx + ry) % root.p, f"{x} + {y}"

    @pytest.mark.parametrize("k", [3, 4, 5])
    def test_reduction_commutes_with_specialization_on_random_polynomials(self, k):
        rng = random.Random(2000 + k)
        root = find_finite_field_root(k)
        _, z_k = zeta_twist_value(k)
        exact_ring = CoefficientRing.cyclotomic(2 * k)
        field = CoefficientRing.prime_field(root.p)
        for _ in range(100):
            P = LaurentPoly2(
                {(rng.randint(-4, 4), rng.randint(0, 4)): rng.randint(-5, 5) for _ in range(rng.randint(1, 6))}
            )
            reduced = reduce_poly_to_prime_field(specialize_z(P, z_k, exact_ring), root)
            assert reduced == specialize_z(P, root.N, field), f"P = {P}"
