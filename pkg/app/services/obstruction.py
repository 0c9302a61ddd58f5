"""
Obstructions to unknotting by t_2k- and tbar_2k-moves, and the bounds
that come with them.

Every test is one-directional: an obstructed verdict proves no sequence of
the moves reaches the unknot, a not-obstructed verdict only says these
invariants do not exclude it.
"""
import logging
from typing import List, Sequence, Set, Tuple

from app.algebra.cyclo import zeta_twist_value
from app.algebra.poly import (
    ZZ,
    CoefficientRing,
    LaurentPoly1,
    LaurentPoly2,
    boundary_coeffs,
    degree_profile,
    reduce_mod,
    specialize_a,
    specialize_z,
)
from app.core.exceptions import DomainError, InternalConsistencyError, RingMismatchError
from app.schemas.knots import FiniteFieldRoot, MoveFamily
from app.schemas.reports import BoundCheck, ModpVerdict, ObstructionReport, Verdict

logger = logging.getLogger(__name__)


def _require_k(k: int, minimum: int = 2) -> None:
    if k < minimum:
        raise DomainError(f"k must be at least {minimum}, got {k}")


def _is_twist_power(poly: LaurentPoly1, k: int) -> bool:
    """True exactly when poly = a^(2k m) with coefficient 1"""
    mono = poly.as_monomial()
    if mono is None:
        return False
    exp, coeff = mono
    return coeff == 1 and exp % (2 * k) == 0


def fox_test(nabla: LaurentPoly1, k: int) -> Verdict:
    """Conway polynomial mod k is invariant under tbar_2k-moves"""
    _require_k(k)
    reduced = reduce_mod(nabla, k)
    obstructed = not reduced.is_one()
    return Verdict(k=k, obstructed=obstructed, test="fox", certificate=reduced.to_json() if obstructed else None)


def fibred_obstruction(nabla: LaurentPoly1) -> bool:
    """Monic Conway polynomial of degree >= 2: Fox obstructs every k >= 2"""
    if nabla.is_zero():
        return False
    return nabla.degree() >= 2 and nabla.leading_coefficient() in (1, -1)


def tbar_test(P: LaurentPoly2, k: int) -> Verdict:
    """P(zeta_2k, z) is invariant under tbar_2k-moves and equals 1 for the unknot"""
    _require_k(k)
    zeta, _ = zeta_twist_value(k)
    value = specialize_a(P, zeta, CoefficientRing.cyclotomic(2 * k))
    obstructed = not value.is_one()
    return Verdict(k=k, obstructed=obstructed, test="homfly-a", certificate=value.to_json() if obstructed else None)


def t_test(P: LaurentPoly2, k: int) -> Verdict:
    """
    A t_2k-move multiplies P(a, z_k) by a^2k (k >= 3) and P(a, 0) mod 2 by a^4 (k = 2),
    so an unknottable knot specializes to exactly a^(2k m)
    """
    _require_k(k)
    if k == 2:
        value = reduce_mod(specialize_z(P, 0, ZZ), 2)
        test = "mod-2"
    else:
        _, z_k = zeta_twist_value(k)
        value = specialize_z(P, z_k, CoefficientRing.cyclotomic(2 * k))
        test = "cyclotomic"
    obstructed = not _is_twist_power(value, k)
    return Verdict(k=k, obstructed=obstructed, test=test, certificate=value.to_json() if obstructed else None)


def t_test_modp(P: LaurentPoly2, k: int, root: FiniteFieldRoot) -> ModpVerdict:
    """Finite-field shadow of t_test at z = N in F_p"""
    _require_k(k, 3)
    if root.k != k:
        raise RingMismatchError(f"root of order {2 * root.k} used for k={k}")
    value = specialize_z(P, root.N, CoefficientRing.prime_field(root.p))
    obstructed = not _is_twist_power(value, k)
    return ModpVerdict(p=root.p, obstructed=obstructed, certificate=value.to_json() if obstructed else None)


def tbar_test_modp(P: LaurentPoly2, k: int, root: FiniteFieldRoot) -> ModpVerdict:
    """Finite-field shadow of tbar_test at a = zeta in F_p"""
    _require_k(k)
    if root.k != k:
        raise RingMismatchError(f"root of order {2 * root.k} used for k={k}")
    value = specialize_a(P, root.zeta, CoefficientRing.prime_field(root.p))
    obstructed = not value.is_one()
    return ModpVerdict(p=root.p, obstructed=obstructed, certificate=value.to_json() if obstructed else None)


def fused_tbar_verdict(P: LaurentPoly2, nabla: LaurentPoly1, k: int) -> Verdict:
    fox = fox_test(nabla, k)
    if fox.obstructed:
        return fox
    homfly_verdict = tbar_test(P, k)
    if homfly_verdict.obstructed:
        return homfly_verdict
    return Verdict(k=k, obstructed=False, test="fox+homfly-a")


def _bound(name: str, value: int, count: int, applicable: bool) -> BoundCheck:
    if not applicable:
        return BoundCheck(name=name, count=count, applicable=False)
    return BoundCheck(name=name, bound=value, count=count, applicable=True, holds=count <= value)


def candidate_sets(
    P: LaurentPoly2, nabla: LaurentPoly1, k_max: int, knot: str = ""
) -> Tuple[ObstructionReport, ObstructionReport]:
    """
    Per-k verdicts for both move families over 2..k_max

    Args:
        P: HOMFLY polynomial of a knot
        nabla: Its Conway polynomial
        k_max: Upper end of the scan
        knot: Label carried into the reports

    Returns:
        Tuple of the t-family and tbar-family reports, each with the
        cardinality bound of its family (inapplicable when P = 1)
    """
    if k_max < 2:
        raise DomainError(f"k_max must be at least 2, got {k_max}")
    ks = range(2, k_max + 1)
    t_verdicts = [t_test(P, k) for k in ks]
    tbar_verdicts = [fused_tbar_verdict(P, nabla, k) for k in ks]

    applicable = not P.is_one()
    profile = degree_profile(P)
    t_open = sum(1 for v in t_verdicts if v.k >= 3 and not v.obstructed)
    tbar_open = sum(1 for v in tbar_verdicts if not v.obstructed)

    t_report = ObstructionReport(
        knot=knot,
        family=MoveFamily.T,
        k_min=2,
        k_max=k_max,
        verdicts=t_verdicts,
        bounds={"deg_z": _bound("deg_z", profile.z_degree, t_open, applicable)},
    )
    tbar_report = ObstructionReport(
        knot=knot,
        family=MoveFamily.TBAR,
        k_min=2,
        k_max=k_max,
        verdicts=tbar_verdicts,
        bounds={"a_span/2": _bound("a_span/2", profile.a_span // 2, tbar_open, applicable)},
    )
    logger.debug(f"Candidates for '{knot}': t={t_report.candidates()} tbar={tbar_report.candidates()}")
    return t_report, tbar_report


def attach_headline_bounds(
    t_report: ObstructionReport, tbar_report: ObstructionReport, crossing_number: int, braid_index: int, applicable: bool
) -> None:
    """Add the c(K) - 1 and b(K) - 1 bounds once the table values are known"""
    t_open = sum(1 for v in t_report.verdicts if v.k >= 3 and not v.obstructed)
    tbar_open = sum(1 for v in tbar_report.verdicts if not v.obstructed)
    t_report.bounds["c-1"] = _bound("c-1", crossing_number - 1, t_open, applicable)
    tbar_report.bounds["b-1"] = _bound("b-1", braid_index - 1, tbar_open, applicable)


def fwm_bounds(P: LaurentPoly2) -> Tuple[int, int]:
    """Lower bounds deg_z(P) + 1 on the crossing number and a-span/2 + 1 on the braid index"""
    profile = degree_profile(P)
    if profile.a_span % 2:
        raise InternalConsistencyError(f"odd a-span {profile.a_span}")
    return profile.z_degree + 1, profile.a_span // 2 + 1


def braid_index_lb_after_twist(P: LaurentPoly2, k: int) -> int:
    """Braid-index lower bound valid for every knot related to P's knot by t_2k-moves"""
    _require_k(k, 3)
    _, z_k = zeta_twist_value(k)
    value = specialize_z(P, z_k, CoefficientRing.cyclotomic(2 * k))
    if value.is_zero():
        raise InternalConsistencyError(f"vanishing specialization at z_{k}")
    span = value.span()
    if span % 2:
        raise InternalConsistencyError(f"odd a-span {span} at z_{k}")
    return span // 2 + 1


def exceptional_k_set(P: LaurentPoly2, k_max: int) -> Set[int]:
    """k in 3..k_max where a boundary coefficient f or g vanishes at z_k, shrinking the a-span"""
    if k_max < 3:
        raise DomainError(f"k_max must be at least 3, got {k_max}")
    f, g = boundary_coeffs(P)
    exceptional: Set[int] = set()
    for k in range(3, k_max + 1):
        _, z_k = zeta_twist_value(k)
        ring = CoefficientRing.cyclotomic(2 * k)
        f_k = f.map_coefficients(lambda c: c, ring).evaluate(z_k)
        g_k = g.map_coefficients(lambda c: c, ring).evaluate(z_k)
        if not f_k or not g_k:
            exceptional.add(k)
    return exceptional


def modp_columns(P: LaurentPoly2, k: int, roots: Sequence[FiniteFieldRoot], family: MoveFamily) -> List[ModpVerdict]:
    test = t_test_modp if family is MoveFamily.T else tbar_test_modp
    return [test(P, k, root) for root in roots]
