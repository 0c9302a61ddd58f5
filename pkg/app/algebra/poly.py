"""
Exact Laurent polynomials.

LaurentPoly1 is a one-variable Laurent polynomial over a CoefficientRing
(Z, Z/m, F_p or the cyclotomic integers). LaurentPoly2 holds HOMFLY values
in the variables a and z with arbitrary-precision integer coefficients.
Both are kept in canonical form: sorted terms, no zero coefficients.
"""
from __future__ import annotations

import dataclasses
import logging
from enum import Enum
from math import gcd
from typing import Any, Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from sympy import isprime

from app.core.exceptions import DomainError, PoleError, RingMismatchError, UndefinedDegreeError

logger = logging.getLogger(__name__)

Coefficient = Any


def _cyclo():
    # app.algebra.cyclo imports this module at load time
    from app.algebra import cyclo
    return cyclo


class RingKind(str, Enum):
    INTEGERS = "Z"
    INTEGERS_MOD = "Z/m"
    PRIME_FIELD = "F_p"
    CYCLOTOMIC = "Q(zeta_n)"


@dataclasses.dataclass(frozen=True)
class CoefficientRing:
    """Descriptor of the ring a LaurentPoly1 draws its coefficients from"""

    kind: RingKind
    modulus: Optional[int] = None
    conductor: Optional[int] = None

    @classmethod
    def integers(cls) -> "CoefficientRing":
        return cls(RingKind.INTEGERS)

    @classmethod
    def integers_mod(cls, m: int) -> "CoefficientRing":
        if m < 2:
            raise DomainError(f"modulus must be at least 2, got {m}")
        return cls(RingKind.INTEGERS_MOD, modulus=m)

    @classmethod
    def prime_field(cls, p: int) -> "CoefficientRing":
        if not isprime(p):
            raise DomainError(f"{p} is not prime")
        return cls(RingKind.PRIME_FIELD, modulus=p)

    @classmethod
    def cyclotomic(cls, n: int, modulus: Optional[int] = None) -> "CoefficientRing":
        """Z[zeta_n], or Z/modulus[zeta_n] when a modulus is given"""
        if n < 1:
            raise DomainError(f"conductor must be positive, got {n}")
        if modulus is not None and modulus < 2:
            raise DomainError(f"modulus must be at least 2, got {modulus}")
        return cls(RingKind.CYCLOTOMIC, modulus=modulus, conductor=n)

    @property
    def is_cyclotomic(self) -> bool:
        return self.kind is RingKind.CYCLOTOMIC

    def normalize(self, c: Coefficient) -> Coefficient:
        if self.kind is RingKind.CYCLOTOMIC:
            cyclo = _cyclo()
            if isinstance(c, cyclo.CyclotomicNumber):
                if c.n != self.conductor or c.modulus != self.modulus:
                    raise RingMismatchError(f"{c.ring_name()} element used in {self.describe()}")
                return c
            if not isinstance(c, int):
                raise RingMismatchError(f"{type(c).__name__} coefficient used in {self.describe()}")
            return cyclo.CyclotomicNumber.from_int(self.conductor, c, self.modulus)
        if not isinstance(c, int):
            raise RingMismatchError(f"{type(c).__name__} coefficient used in {self.describe()}")
        if self.modulus is not None:
            return c % self.modulus
        return c

    def zero(self) -> Coefficient:
        return self.normalize(0)

    def one(self) -> Coefficient:
        return self.normalize(1)

    def inverse(self, c: Coefficient) -> Coefficient:
        c = self.normalize(c)
        if self.kind is RingKind.CYCLOTOMIC:
            return c.unit_inverse()
        if self.modulus is None:
            if c in (1, -1):
                return c
            raise PoleError(f"{c} is not a unit in Z")
        if gcd(c, self.modulus) != 1:
            raise PoleError(f"{c} is not a unit in {self.describe()}")
        return pow(c, -1, self.modulus)

    def power(self, c: Coefficient, e: int) -> Coefficient:
        if e < 0:
            return self.power(self.inverse(c), -e)
        c = self.normalize(c)
        if self.kind is RingKind.CYCLOTOMIC:
            return c ** e
        if self.modulus is not None:
            return pow(c, e, self.modulus)
        return c ** e

    def describe(self) -> str:
        if self.kind is RingKind.INTEGERS:
            return "Z"
        if self.kind is RingKind.INTEGERS_MOD:
            return f"Z/{self.modulus}"
        if self.kind is RingKind.PRIME_FIELD:
            return f"F_{self.modulus}"
        if self.modulus is None:
            return f"Q(zeta_{self.conductor})"
        return f"Z/{self.modulus}[zeta_{self.conductor}]"

    def coefficient_to_json(self, c: Coefficient) -> Any:
        if self.kind is RingKind.CYCLOTOMIC:
            return c.to_json()
        return str(c)

    def coefficient_from_json(self, raw: Any) -> Coefficient:
        if self.kind is RingKind.CYCLOTOMIC:
            return _cyclo().CyclotomicNumber.from_json(self.conductor, raw, self.modulus)
        return self.normalize(int(raw))


ZZ = CoefficientRing.integers()


def _monomial_text(var: str, e: int) -> str:
    if e == 0:
        return ""
    if e == 1:
        return var
    return f"{var}^{e}"


def format_terms(parts: Sequence[Tuple[int, str]]) -> str:
    """Render (integer coefficient, monomial text) pairs as a signed sum"""
    if not parts:
        return "0"
    out: List[str] = []
    for i, (c, mono) in enumerate(parts):
        magnitude = abs(c)
        if not mono:
            body = str(magnitude)
        elif magnitude == 1:
            body = mono
        else:
            body = f"{magnitude}*{mono}"
        if i == 0:
            out.append(f"-{body}" if c < 0 else body)
        else:
            out.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(out)


@dataclasses.dataclass(init=False, frozen=True)
class LaurentPoly1:
    """One-variable Laurent polynomial over a CoefficientRing"""

    terms: Tuple[Tuple[int, Coefficient], ...]
    var: str
    ring: CoefficientRing

    def __init__(
        self,
        terms: Optional[Mapping[int, Coefficient] | Iterable[Tuple[int, Coefficient]]] = None,
        var: str = "z",
        ring: Optional[CoefficientRing] = None,
    ):
        ring = ring or ZZ
        items = terms.items() if isinstance(terms, Mapping) else (terms or ())
        collected: Dict[int, Coefficient] = {}
        for e, c in items:
            e = int(e)
            c = ring.normalize(c)
            if e in collected:
                c = ring.normalize(collected[e] + c)
            collected[e] = c
        canonical = tuple(sorted(((e, c) for e, c in collected.items() if c), key=lambda t: t[0]))
        object.__setattr__(self, "terms", canonical)
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "ring", ring)

    @classmethod
    def constant(cls, c: Coefficient, var: str = "z", ring: Optional[CoefficientRing] = None) -> "LaurentPoly1":
        return cls({0: c}, var, ring)

    @classmethod
    def monomial(
        cls, c: Coefficient, exp: int, var: str = "z", ring: Optional[CoefficientRing] = None
    ) -> "LaurentPoly1":
        return cls({exp: c}, var, ring)

    @property
    def coeffs(self) -> Dict[int, Coefficient]:
        return dict(self.terms)

    def coefficient(self, e: int) -> Coefficient:
        return self.coeffs.get(e, self.ring.zero())

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms[0][0] == 0 and self.terms[0][1] == 1

    def as_monomial(self) -> Optional[Tuple[int, Coefficient]]:
        """(exponent, coefficient) when exactly one term is present"""
        if len(self.terms) != 1:
            return None
        return self.terms[0]

    def degree(self) -> int:
        if not self.terms:
            raise UndefinedDegreeError("zero polynomial")
        return self.terms[-1][0]

    def valuation(self) -> int:
        if not self.terms:
            raise UndefinedDegreeError("zero polynomial")
        return self.terms[0][0]

    def span(self) -> int:
        return self.degree() - self.valuation()

    def leading_coefficient(self) -> Coefficient:
        if not self.terms:
            raise UndefinedDegreeError("zero polynomial")
        return self.terms[-1][1]

    def zero_like(self) -> "LaurentPoly1":
        return LaurentPoly1((), self.var, self.ring)

    def one_like(self) -> "LaurentPoly1":
        return LaurentPoly1.constant(1, self.var, self.ring)

    def map_coefficients(self, fn, ring: CoefficientRing) -> "LaurentPoly1":
        return LaurentPoly1({e: fn(c) for e, c in self.terms}, self.var, ring)

    def evaluate(self, v: Coefficient) -> Coefficient:
        """Substitute a ring element for the variable"""
        total = self.ring.zero()
        for e, c in self.terms:
            total = self.ring.normalize(total + c * self.ring.power(v, e))
        return total

    def _coerce(self, other: Any) -> "LaurentPoly1":
        if isinstance(other, LaurentPoly1):
            if other.var != self.var or other.ring != self.ring:
                raise RingMismatchError(
                    f"cannot combine {self.ring.describe()}[{self.var}] with {other.ring.describe()}[{other.var}]"
                )
            return other
        return LaurentPoly1.constant(other, self.var, self.ring)

    def __add__(self, other: Any) -> "LaurentPoly1":
        other = self._coerce(other)
        acc = dict(self.terms)
        for e, c in other.terms:
            acc[e] = acc[e] + c if e in acc else c
        return LaurentPoly1(acc, self.var, self.ring)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly1":
        return LaurentPoly1({e: -c for e, c in self.terms}, self.var, self.ring)

    def __sub__(self, other: Any) -> "LaurentPoly1":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> "LaurentPoly1":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "LaurentPoly1":
        other = self._coerce(other)
        acc: Dict[int, Coefficient] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                prod = c1 * c2
                acc[e] = acc[e] + prod if e in acc else prod
        return LaurentPoly1(acc, self.var, self.ring)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly1":
        if n < 0:
            mono = self.as_monomial()
            if mono is None:
                raise PoleError(f"{self} is not invertible")
            e, c = mono
            inverse = LaurentPoly1({-e: self.ring.inverse(c)}, self.var, self.ring)
            return inverse ** (-n)
        result = self.one_like()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def to_json(self) -> List[List[Any]]:
        return [[e, self.ring.coefficient_to_json(c)] for e, c in self.terms]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[Any]], var: str = "z", ring: Optional[CoefficientRing] = None) -> "LaurentPoly1":
        ring = ring or ZZ
        return cls({int(e): ring.coefficient_from_json(c) for e, c in data}, var, ring)

    def __str__(self) -> str:
        if self.ring.is_cyclotomic:
            if not self.terms:
                return "0"
            pieces = []
            for e, c in self.terms:
                mono = _monomial_text(self.var, e)
                pieces.append(f"({c})*{mono}" if mono else f"({c})")
            return " + ".join(pieces)
        return format_terms([(c, _monomial_text(self.var, e)) for e, c in self.terms])

    def __repr__(self) -> str:
        return f"LaurentPoly1('{self}', ring={self.ring.describe()})"


@dataclasses.dataclass(init=False, frozen=True)
class LaurentPoly2:
    """Laurent polynomial in a and z with integer coefficients, keyed by (a-exponent, z-exponent)"""

    terms: Tuple[Tuple[Tuple[int, int], int], ...]

    def __init__(self, terms: Optional[Mapping[Tuple[int, int], int] | Iterable[Tuple[Tuple[int, int], int]]] = None):
        items = terms.items() if isinstance(terms, Mapping) else (terms or ())
        collected: Dict[Tuple[int, int], int] = {}
        for (ae, ze), c in items:
            if not isinstance(c, int):
                raise RingMismatchError("two-variable polynomials take integer coefficients")
            key = (int(ae), int(ze))
            collected[key] = collected.get(key, 0) + c
        object.__setattr__(self, "terms", tuple(sorted((k, c) for k, c in collected.items() if c)))

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly2":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, c: int, a_exp: int, z_exp: int) -> "LaurentPoly2":
        return cls({(a_exp, z_exp): c})

    @property
    def coeffs(self) -> Dict[Tuple[int, int], int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == (((0, 0), 1),)

    def zero_like(self) -> "LaurentPoly2":
        return LaurentPoly2()

    def one_like(self) -> "LaurentPoly2":
        return LaurentPoly2.constant(1)

    def _coerce(self, other: Any) -> "LaurentPoly2":
        if isinstance(other, LaurentPoly2):
            return other
        if isinstance(other, int):
            return LaurentPoly2.constant(other)
        raise RingMismatchError(f"cannot combine a two-variable polynomial with {type(other).__name__}")

    def __add__(self, other: Any) -> "LaurentPoly2":
        other = self._coerce(other)
        acc = dict(self.terms)
        for k, c in other.terms:
            acc[k] = acc.get(k, 0) + c
        return LaurentPoly2(acc)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly2":
        return LaurentPoly2({k: -c for k, c in self.terms})

    def __sub__(self, other: Any) -> "LaurentPoly2":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> "LaurentPoly2":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "LaurentPoly2":
        other = self._coerce(other)
        acc: Dict[Tuple[int, int], int] = {}
        for (a1, z1), c1 in self.terms:
            for (a2, z2), c2 in other.terms:
                key = (a1 + a2, z1 + z2)
                acc[key] = acc.get(key, 0) + c1 * c2
        return LaurentPoly2(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly2":
        if n < 0:
            if len(self.terms) != 1 or self.terms[0][1] not in (1, -1):
                raise PoleError(f"{self} is not invertible")
            (ae, ze), c = self.terms[0]
            return LaurentPoly2.monomial(c, -ae, -ze) ** (-n)
        result = self.one_like()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def to_json(self) -> List[List[Any]]:
        return [[ae, ze, str(c)] for (ae, ze), c in self.terms]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[Any]]) -> "LaurentPoly2":
        return cls({(int(ae), int(ze)): int(c) for ae, ze, c in data})

    def __str__(self) -> str:
        parts = []
        for (ae, ze), c in self.terms:
            mono = "*".join(m for m in (_monomial_text("a", ae), _monomial_text("z", ze)) if m)
            parts.append((c, mono))
        return format_terms(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly2('{self}')"


A = LaurentPoly2.monomial(1, 1, 0)
Z = LaurentPoly2.monomial(1, 0, 1)


class DegreeProfile(NamedTuple):
    z_degree: int
    a_span: int
    a_min: int
    a_max: int


def degree_profile(p: LaurentPoly2) -> DegreeProfile:
    """
    Highest z-exponent and the a-span of a nonzero polynomial

    Raises:
        UndefinedDegreeError: for the zero polynomial
    """
    if p.is_zero():
        raise UndefinedDegreeError("zero polynomial")
    a_exps = [ae for (ae, _), _ in p.terms]
    z_exps = [ze for (_, ze), _ in p.terms]
    a_min, a_max = min(a_exps), max(a_exps)
    return DegreeProfile(max(z_exps), a_max - a_min, a_min, a_max)


def boundary_coeffs(p: LaurentPoly2) -> Tuple[LaurentPoly1, LaurentPoly1]:
    """
    The z-polynomials f and g at the lowest and highest a-degree, so that
    p = a^m f(z) + ... + a^n g(z)
    """
    profile = degree_profile(p)
    f = LaurentPoly1({ze: c for (ae, ze), c in p.terms if ae == profile.a_min}, var="z")
    g = LaurentPoly1({ze: c for (ae, ze), c in p.terms if ae == profile.a_max}, var="z")
    return f, g


def specialize_z(p: LaurentPoly2, v: Coefficient, ring: Optional[CoefficientRing] = None) -> LaurentPoly1:
    """
    Substitute z := v and collect by powers of a

    Args:
        p: Two-variable polynomial
        v: Ring element substituted for z
        ring: Coefficient ring of v (defaults to Z)

    Returns:
        LaurentPoly1: polynomial in a over ring
    """
    ring = ring or ZZ
    v = ring.normalize(v)
    powers: Dict[int, Coefficient] = {}
    acc: Dict[int, Coefficient] = {}
    for (ae, ze), c in p.terms:
        if ze not in powers:
            powers[ze] = ring.power(v, ze)
        term = ring.normalize(c * powers[ze])
        acc[ae] = acc[ae] + term if ae in acc else term
    return LaurentPoly1(acc, var="a", ring=ring)


def specialize_a(p: LaurentPoly2, v: Coefficient, ring: Optional[CoefficientRing] = None) -> LaurentPoly1:
    """Substitute a := v (v must be invertible) and collect by powers of z"""
    ring = ring or ZZ
    v = ring.normalize(v)
    if not v:
        raise PoleError("a := 0 in a Laurent polynomial")
    powers: Dict[int, Coefficient] = {}
    acc: Dict[int, Coefficient] = {}
    for (ae, ze), c in p.terms:
        if ae not in powers:
            powers[ae] = ring.power(v, ae)
        term = ring.normalize(c * powers[ae])
        acc[ze] = acc[ze] + term if ze in acc else term
    return LaurentPoly1(acc, var="z", ring=ring)


def reduce_mod(p: LaurentPoly1, m: int) -> LaurentPoly1:
    """Coefficientwise reduction of an integer polynomial to Z/m"""
    if p.ring != ZZ:
        raise RingMismatchError(f"reduction mod {m} expects integer coefficients, got {p.ring.describe()}")
    return LaurentPoly1(p.terms, p.var, CoefficientRing.integers_mod(m))


def specialize_z_skein_unit(p: LaurentPoly2) -> LaurentPoly1:
    """Substitute z := a^-1 - a; a knot's HOMFLY polynomial becomes 1"""
    unit = LaurentPoly1({-1: 1, 1: -1}, var="a")
    powers: Dict[int, LaurentPoly1] = {}
    total = LaurentPoly1((), var="a")
    for (ae, ze), c in p.terms:
        if ze < 0:
            raise PoleError("a^-1 - a is not a unit")
        if ze not in powers:
            powers[ze] = unit ** ze
        total = total + powers[ze] * LaurentPoly1.monomial(c, ae, var="a")
    return total
