"""
Cyclotomic integers Z[zeta_n] and roots of unity in prime fields.

Elements are stored reduced modulo the n-th cyclotomic polynomial, so two
elements are equal exactly when their coefficient tuples are.
"""
from __future__ import annotations

import dataclasses
import logging
from functools import lru_cache
from typing import Any, List, Optional, Sequence, Tuple

from sympy import divisors, isprime, primefactors

from app.algebra.poly import CoefficientRing, LaurentPoly1, format_terms
from app.core.config import get_settings
from app.core.exceptions import (
    DomainError,
    InternalConsistencyError,
    PoleError,
    ResourceCapExceeded,
    RingMismatchError,
)
from app.schemas.knots import FiniteFieldRoot

logger = logging.getLogger(__name__)


def _divide_exact(numerator: Sequence[int], divisor: Sequence[int]) -> List[int]:
    """Divide dense integer polynomials (lowest degree first) by a monic divisor"""
    remainder = list(numerator)
    d = len(divisor) - 1
    quotient = [0] * (len(remainder) - d)
    for i in range(len(remainder) - 1, d - 1, -1):
        c = remainder[i]
        if c:
            quotient[i - d] = c
            for j in range(d + 1):
                remainder[i - d + j] -= c * divisor[j]
    if any(remainder[:d]):
        raise InternalConsistencyError("inexact division by a cyclotomic factor")
    return quotient


@lru_cache(maxsize=None)
def _phi_coefficients(n: int) -> Tuple[int, ...]:
    quotient: List[int] = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        quotient = _divide_exact(quotient, _phi_coefficients(d))
    return tuple(quotient)


def cyclotomic_poly(n: int) -> LaurentPoly1:
    """
    The n-th cyclotomic polynomial, as x^n - 1 divided by Phi_d for every proper divisor d

    Args:
        n: Positive integer

    Returns:
        LaurentPoly1: monic polynomial in x of degree phi(n)
    """
    if n < 1:
        raise DomainError(f"cyclotomic polynomial needs n >= 1, got {n}")
    return LaurentPoly1(dict(enumerate(_phi_coefficients(n))), var="x")


def _reduce(n: int, coeffs: Sequence[int], modulus: Optional[int]) -> Tuple[int, ...]:
    phi = _phi_coefficients(n)
    d = len(phi) - 1
    folded = [0] * n
    for i, c in enumerate(coeffs):
        folded[i % n] += c
    for i in range(n - 1, d - 1, -1):
        c = folded[i]
        if c:
            for j in range(d + 1):
                folded[i - d + j] -= c * phi[j]
    rep = folded[:d]
    if modulus is not None:
        rep = [c % modulus for c in rep]
    return tuple(rep)


@dataclasses.dataclass(frozen=True, init=False, eq=False)
class CyclotomicNumber:
    """Element of Z[zeta_n], or of Z/m[zeta_n] when modulus is set"""

    n: int
    coeffs: Tuple[int, ...]
    modulus: Optional[int] = None

    def __init__(self, n: int, coeffs: Sequence[int], modulus: Optional[int] = None):
        if n < 1:
            raise DomainError(f"conductor must be positive, got {n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "coeffs", _reduce(n, coeffs, modulus))

    @classmethod
    def from_int(cls, n: int, value: int, modulus: Optional[int] = None) -> "CyclotomicNumber":
        return cls(n, [value], modulus)

    @classmethod
    def power_of_zeta(cls, n: int, j: int, modulus: Optional[int] = None) -> "CyclotomicNumber":
        coeffs = [0] * n
        coeffs[j % n] = 1
        return cls(n, coeffs, modulus)

    @classmethod
    def zeta(cls, n: int, modulus: Optional[int] = None) -> "CyclotomicNumber":
        return cls.power_of_zeta(n, 1, modulus)

    @property
    def ring(self) -> CoefficientRing:
        return CoefficientRing.cyclotomic(self.n, self.modulus)

    @property
    def rep(self) -> LaurentPoly1:
        """Representative modulo Phi_n as a polynomial in x"""
        ring = CoefficientRing.integers() if self.modulus is None else CoefficientRing.integers_mod(self.modulus)
        return LaurentPoly1(dict(enumerate(self.coeffs)), var="x", ring=ring)

    def ring_name(self) -> str:
        return self.ring.describe()

    def _coerce(self, other: Any) -> Optional["CyclotomicNumber"]:
        if isinstance(other, CyclotomicNumber):
            if other.n != self.n or other.modulus != self.modulus:
                raise RingMismatchError(f"cannot combine {self.ring_name()} with {other.ring_name()}")
            return other
        if isinstance(other, int):
            return CyclotomicNumber.from_int(self.n, other, self.modulus)
        return None

    def __add__(self, other: Any) -> "CyclotomicNumber":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CyclotomicNumber(self.n, [x + y for x, y in zip(self.coeffs, other.coeffs)], self.modulus)

    __radd__ = __add__

    def __neg__(self) -> "CyclotomicNumber":
        return CyclotomicNumber(self.n, [-x for x in self.coeffs], self.modulus)

    def __sub__(self, other: Any) -> "CyclotomicNumber":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "CyclotomicNumber":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other: Any) -> "CyclotomicNumber":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        product = [0] * (2 * len(self.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    product[i + j] += x * y
        return CyclotomicNumber(self.n, product, self.modulus)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "CyclotomicNumber":
        if e < 0:
            return self.unit_inverse() ** (-e)
        result = CyclotomicNumber.from_int(self.n, 1, self.modulus)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def unit_inverse(self) -> "CyclotomicNumber":
        """Inverse of an element of the form +-zeta^j"""
        zeta = CyclotomicNumber.zeta(self.n, self.modulus)
        power = CyclotomicNumber.from_int(self.n, 1, self.modulus)
        for j in range(self.n):
            if self == power:
                return CyclotomicNumber.power_of_zeta(self.n, -j, self.modulus)
            if self == -power:
                return -CyclotomicNumber.power_of_zeta(self.n, -j, self.modulus)
            power = power * zeta
        raise PoleError(f"{self} is not of the form +-zeta^j in {self.ring_name()}")

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_one(self) -> bool:
        return self == 1

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, int):
            other = CyclotomicNumber.from_int(self.n, other, self.modulus)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return (self.n, self.modulus, self.coeffs) == (other.n, other.modulus, other.coeffs)

    def __hash__(self) -> int:
        if self.modulus is None and not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.n, self.modulus, self.coeffs))

    def to_json(self) -> List[List[Any]]:
        return [[i, str(c)] for i, c in enumerate(self.coeffs) if c]

    @classmethod
    def from_json(cls, n: int, data: Sequence[Sequence[Any]], modulus: Optional[int] = None) -> "CyclotomicNumber":
        coeffs = [0] * n
        for i, c in data:
            coeffs[int(i) % n] += int(c)
        return cls(n, coeffs, modulus)

    def __str__(self) -> str:
        parts = [(c, "" if i == 0 else ("zeta" if i == 1 else f"zeta^{i}")) for i, c in enumerate(self.coeffs) if c]
        return format_terms(parts)

    def __repr__(self) -> str:
        return f"CyclotomicNumber({self.n}, '{self}', ring={self.ring_name()})"


@lru_cache(maxsize=None)
def zeta_twist_value(k: int) -> Tuple[CyclotomicNumber, CyclotomicNumber]:
    """
    The pair (zeta_2k, z_k) with z_k = zeta_2k - zeta_2k^-1

    Args:
        k: Twist parameter, at least 2

    Returns:
        Tuple of cyclotomic numbers of conductor 2k
    """
    if k < 2:
        raise DomainError(f"twist parameter k must be at least 2, got {k}")
    zeta = CyclotomicNumber.zeta(2 * k)
    z_k = zeta - CyclotomicNumber.power_of_zeta(2 * k, -1)
    if not z_k:
        raise InternalConsistencyError(f"z_{k} vanished")
    return zeta, z_k


def _element_of_order(order: int, p: int) -> int:
    for g in range(2, p):
        candidate = pow(g, (p - 1) // order, p)
        if all(pow(candidate, order // q, p) != 1 for q in primefactors(order)):
            return candidate
    raise InternalConsistencyError(f"F_{p} has no element of order {order}")


@lru_cache(maxsize=None)
def _scan_dirichlet(k: int, skip: int, cap: int) -> FiniteFieldRoot:
    order = 2 * k
    seen = 0
    for t in range(1, cap + 1):
        p = order * t + 1
        if not isprime(p):
            continue
        if seen == skip:
            zeta = _element_of_order(order, p)
            root = FiniteFieldRoot(p=p, k=k, zeta=zeta, N=(zeta - pow(zeta, -1, p)) % p)
            logger.debug(f"Root of order {order} in F_{p}: zeta={zeta}, N={root.N}")
            return root
        seen += 1
    raise ResourceCapExceeded(f"too large: no prime {order}t+1 with skip={skip} among the first {cap} values of t")


def find_finite_field_root(k: int, skip: int = 0, search_cap: Optional[int] = None) -> FiniteFieldRoot:
    """
    The (skip+1)-th smallest prime p = 1 mod 2k with an element of exact order 2k

    Args:
        k: Twist parameter, at least 2
        skip: Number of qualifying primes to pass over
        search_cap: Largest t tried in 2k*t + 1 (defaults to PRIME_SEARCH_CAP)

    Returns:
        FiniteFieldRoot: p, k, zeta and N = zeta - zeta^-1 in F_p
    """
    if k < 2:
        raise DomainError(f"twist parameter k must be at least 2, got {k}")
    if skip < 0:
        raise DomainError(f"skip must be nonnegative, got {skip}")
    cap = search_cap if search_cap is not None else get_settings().PRIME_SEARCH_CAP
    return _scan_dirichlet(k, skip, cap)


def dirichlet_primes(k: int, count: int) -> List[FiniteFieldRoot]:
    return [find_finite_field_root(k, skip) for skip in range(count)]


def reduce_to_prime_field(c: CyclotomicNumber, root: FiniteFieldRoot) -> int:
    """Image of c under Z[zeta_2k] -> F_p sending zeta_2k to root.zeta"""
    if c.n != 2 * root.k or c.modulus is not None:
        raise RingMismatchError(f"{c.ring_name()} does not map to F_{root.p} via a root of order {2 * root.k}")
    total = 0
    power = 1
    for coeff in c.coeffs:
        total += coeff * power
        power = power * root.zeta % root.p
    return total % root.p


def reduce_poly_to_prime_field(poly: LaurentPoly1, root: FiniteFieldRoot) -> LaurentPoly1:
    if poly.ring != CoefficientRing.cyclotomic(2 * root.k):
        raise RingMismatchError(f"expected coefficients in Q(zeta_{2 * root.k}), got {poly.ring.describe()}")
    return poly.map_coefficients(lambda c: reduce_to_prime_field(c, root), CoefficientRing.prime_field(root.p))
