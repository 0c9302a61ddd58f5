"""
HOMFLY and Conway polynomials of braid closures.

Convention: a^-1 P(L+) - a P(L-) = z P(L0), P(unknot) = 1. Values are
computed on a skein tree over descending diagrams: the first crossing met
as an under-pass is switched and smoothed until every branch is descending,
and a descending c-component diagram is the c-component unlink.
"""
from __future__ import annotations

import dataclasses
import logging
from typing import Any, Callable, Optional, Tuple

from app.algebra.poly import (
    A,
    Z,
    ZZ,
    CoefficientRing,
    LaurentPoly1,
    LaurentPoly2,
    specialize_a,
)
from app.core.cache import SkeinCache, get_skein_cache
from app.core.config import get_settings
from app.core.exceptions import DomainError, ResourceCapExceeded
from app.knots.braid import BraidWord, Diagram, braid_to_diagram, canonical_key, markov_reduce

logger = logging.getLogger(__name__)

# (a^-1 - a) z^-1, the value of a split unknotted component
DELTA = LaurentPoly2({(-1, -1): 1, (1, -1): -1})

_A2 = A ** 2
_AZ = A * Z
_A_INV2 = LaurentPoly2.monomial(1, -2, 0)
_A_INV_Z = LaurentPoly2.monomial(1, -1, 1)


def unlink_value(components: int) -> LaurentPoly2:
    if components < 1:
        raise DomainError(f"an unlink has at least one component, got {components}")
    return DELTA ** (components - 1)


def _evaluate(word: BraidWord, cache: Optional[SkeinCache]) -> LaurentPoly2:
    reduced, split = markov_reduce(word)
    key = canonical_key(reduced)

    value = cache.get_cache(key) if cache is not None else None
    if value is None:
        diagram = braid_to_diagram(reduced)
        index = diagram.first_bad_crossing()
        if index is None:
            value = unlink_value(diagram.components)
        else:
            switched = _evaluate(diagram.switched(index), cache)
            smoothed = _evaluate(diagram.smoothed(index), cache)
            if reduced.letters[index] > 0:
                # P+ = a^2 P- + a z P0
                value = _A2 * switched + _AZ * smoothed
            else:
                # P- = a^-2 P+ - a^-1 z P0
                value = _A_INV2 * switched - _A_INV_Z * smoothed
        if cache is not None:
            cache.set_cache(key, value)

    if split:
        value = value * DELTA ** split
    return value


def homfly(d: Diagram, crossing_cap: Optional[int] = None, cache: Optional[SkeinCache] = None) -> LaurentPoly2:
    """
    HOMFLY polynomial of a closure diagram

    Args:
        d: Closure diagram
        crossing_cap: Largest crossing count accepted (defaults to CROSSING_CAP)
        cache: Skein memo (defaults to the global cache when enabled)

    Returns:
        LaurentPoly2: P(a, z)

    Raises:
        ResourceCapExceeded: when the diagram has more crossings than the cap
    """
    settings = get_settings()
    cap = crossing_cap if crossing_cap is not None else settings.CROSSING_CAP
    if d.crossing_count > cap:
        raise ResourceCapExceeded(f"too large: {d.crossing_count} crossings exceed the skein cap of {cap}")
    if cache is None and settings.SKEIN_CACHE_ENABLED:
        cache = get_skein_cache()
    value = _evaluate(d.braid, cache)
    logger.debug(f"HOMFLY of '{d.braid}' = {value}")
    return value


def homfly_of_braid(b: BraidWord, crossing_cap: Optional[int] = None, cache: Optional[SkeinCache] = None) -> LaurentPoly2:
    return homfly(braid_to_diagram(b), crossing_cap=crossing_cap, cache=cache)


def conway(d: Diagram, crossing_cap: Optional[int] = None, cache: Optional[SkeinCache] = None) -> LaurentPoly1:
    """Conway polynomial: the HOMFLY polynomial at a = 1"""
    return specialize_a(homfly(d, crossing_cap=crossing_cap, cache=cache), 1, ZZ)


@dataclasses.dataclass(frozen=True)
class TwistMatrix:
    """
    2x2 matrix over a polynomial ring in a

    Entries are LaurentPoly2 over Z[a, z] or LaurentPoly1 in a over a
    specialized coefficient ring; anything with +, * and one_like works.
    """

    entries: Tuple[Tuple[Any, Any], Tuple[Any, Any]]

    def __matmul__(self, other: "TwistMatrix") -> "TwistMatrix":
        (p, q), (r, s) = self.entries
        (t, u), (v, w) = other.entries
        return TwistMatrix(((p * t + q * v, p * u + q * w), (r * t + s * v, r * u + s * w)))

    def identity(self) -> "TwistMatrix":
        one = self.entries[0][0].one_like()
        zero = self.entries[0][0].zero_like()
        return TwistMatrix(((one, zero), (zero, one)))

    def pow(self, n: int) -> "TwistMatrix":
        if n < 0:
            raise DomainError("negative powers go through the inverse base matrix")
        result = self.identity()
        base = self
        while n:
            if n & 1:
                result = result @ base
            n >>= 1
            if n:
                base = base @ base
        return result

    def trace(self) -> Any:
        return self.entries[0][0] + self.entries[1][1]

    def det(self) -> Any:
        (p, q), (r, s) = self.entries
        return p * s - q * r

    def is_scalar(self, value: Any) -> bool:
        (p, q), (r, s) = self.entries
        return q.is_zero() and r.is_zero() and p == value and s == value

    def apply(self, vector: Tuple[Any, Any]) -> Tuple[Any, Any]:
        (p, q), (r, s) = self.entries
        x, y = vector
        return p * x + q * y, r * x + s * y


def _a_power_factory(ring: Optional[CoefficientRing]) -> Callable[[int], Any]:
    if ring is None:
        return lambda e: LaurentPoly2.monomial(1, e, 0)
    return lambda e: LaurentPoly1.monomial(ring.one(), e, var="a", ring=ring)


def twist_base(ring: Optional[CoefficientRing] = None, z_value: Any = None) -> Tuple[TwistMatrix, TwistMatrix]:
    """
    The recursion matrix [[0, 1], [a^2, a z]] and its inverse [[-z a^-1, a^-2], [1, 0]]

    With ring None the entries live in Z[a, z]; otherwise z is specialized to
    z_value and entries are polynomials in a over ring.
    """
    a_pow = _a_power_factory(ring)
    if ring is None:
        z = Z
    else:
        if z_value is None:
            raise DomainError("a specialized twist matrix needs a z-value")
        z = LaurentPoly1.constant(z_value, var="a", ring=ring)
    zero = a_pow(0).zero_like()
    one = a_pow(0)
    base = TwistMatrix(((zero, one), (a_pow(2), a_pow(1) * z)))
    inverse = TwistMatrix(((-(z * a_pow(-1)), a_pow(-2)), (one, zero)))
    return base, inverse


def twist_matrix_power(n: int, ring: Optional[CoefficientRing] = None, z_value: Any = None) -> TwistMatrix:
    """
    M^n by square-and-multiply; negative n powers the inverse base matrix

    The column action is (P(L_n), P(L_n+1)) = M^n (P(L_0), P(L_1)).
    """
    base, inverse = twist_base(ring, z_value)
    if n >= 0:
        return base.pow(n)
    return inverse.pow(-n)


def two_strand_homfly(m: int) -> LaurentPoly2:
    """HOMFLY of the closure of sigma_1^m for any integer m"""
    first, _ = twist_matrix_power(m).apply((DELTA, LaurentPoly2.constant(1)))
    return first
