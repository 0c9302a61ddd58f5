"""
Self-verification suites.

Each suite is a list of named checks run concurrently in worker threads;
a check returns None on success or a detail string describing the failure.
"""
import asyncio
import logging
import random
from typing import Callable, List, Optional, Tuple

from app.algebra.cyclo import CyclotomicNumber, dirichlet_primes, reduce_poly_to_prime_field, zeta_twist_value
from app.algebra.poly import (
    ZZ,
    CoefficientRing,
    LaurentPoly1,
    LaurentPoly2,
    degree_profile,
    reduce_mod,
    specialize_a,
    specialize_z,
    specialize_z_skein_unit,
)
from app.core.config import Settings, get_settings
from app.core.exceptions import UnknownSuiteError
from app.knots.braid import BraidWord, braid_to_diagram, closure_component_count, parse_braid
from app.knots.homfly import homfly_of_braid, twist_matrix_power, two_strand_homfly
from app.schemas.knots import MoveFamily
from app.schemas.reports import CheckResult, SuiteReport
from app.services.families import (
    FamilyInstance,
    lcm_torus_exponent,
    torus_homfly,
    twist_knot_braid,
    twist_knot_homfly,
    untwist_witness,
    verify_prop6,
)
from app.services.obstruction import (
    attach_headline_bounds,
    braid_index_lb_after_twist,
    candidate_sets,
    exceptional_k_set,
    fibred_obstruction,
    fox_test,
    fwm_bounds,
    modp_columns,
    t_test,
)
from app.services.table_service import load_table

logger = logging.getLogger(__name__)

Check = Tuple[str, Callable[[], Optional[str]]]

SUITES = ("prop6", "matrix", "skein", "fwm-table")

_A_INV = LaurentPoly2.monomial(1, -1, 0)
_A = LaurentPoly2.monomial(1, 1, 0)
_Z = LaurentPoly2.monomial(1, 0, 1)


def _a_power(e: int, ring: CoefficientRing) -> LaurentPoly1:
    return LaurentPoly1.monomial(ring.one(), e, var="a", ring=ring)


def _word(rng: random.Random, strands: int, length: int) -> List[int]:
    return [rng.choice((1, -1)) * rng.randint(1, strands - 1) for _ in range(length)]


def _torus(m: int) -> LaurentPoly2:
    return homfly_of_braid(BraidWord(2, (1 if m > 0 else -1,) * abs(m)))


# Matrix suite

def _check_twist_power_scalar(k_max: int) -> Optional[str]:
    for k in range(3, k_max + 1):
        ring = CoefficientRing.cyclotomic(2 * k)
        _, z_k = zeta_twist_value(k)
        if not twist_matrix_power(2 * k, ring, z_k).is_scalar(_a_power(2 * k, ring)):
            return f"M^{2 * k} != a^{2 * k} I at k={k}"
    return None


def _check_trace_det(k_max: int) -> Optional[str]:
    for k in range(3, k_max + 1):
        ring = CoefficientRing.cyclotomic(2 * k)
        _, z_k = zeta_twist_value(k)
        base = twist_matrix_power(1, ring, z_k)
        if base.trace() != LaurentPoly1.monomial(z_k, 1, var="a", ring=ring):
            return f"trace {base.trace()} at k={k}"
        if base.det() != LaurentPoly1.monomial(-1, 2, var="a", ring=ring):
            return f"determinant {base.det()} at k={k}"
    return None


def _check_k2_mod4() -> Optional[str]:
    ring = CoefficientRing.cyclotomic(4, modulus=4)
    z = CyclotomicNumber(4, (0, 2), 4)
    if not twist_matrix_power(4, ring, z).is_scalar(_a_power(4, ring)):
        return "M^4 is not a^4 I modulo 4 at z = 2 zeta_4"
    integral = CoefficientRing.cyclotomic(4)
    if twist_matrix_power(4, integral, CyclotomicNumber(4, (0, 2))).is_scalar(_a_power(4, integral)):
        return "M^4 unexpectedly scalar over Z[zeta_4]"
    return None


def _check_k2_zeta8() -> Optional[str]:
    ring = CoefficientRing.cyclotomic(8)
    _, z_4 = zeta_twist_value(4)
    if twist_matrix_power(4, ring, z_4).is_scalar(_a_power(4, ring)):
        return "M^4 = a^4 I over Q(zeta_8) at z_4"
    return None


def _check_fifth_power_row() -> Optional[str]:
    ring = CoefficientRing.cyclotomic(4)
    i = CyclotomicNumber.zeta(4)
    (p, q), _ = twist_matrix_power(5, ring, i * 2).entries
    expected_p = LaurentPoly1.monomial(i * -4, 5, var="a", ring=ring)
    expected_q = LaurentPoly1.monomial(5, 4, var="a", ring=ring)
    if p != expected_p or q != expected_q:
        return f"first row of M^5 is ({p}, {q})"
    return None


def _check_engine_vs_matrix() -> Optional[str]:
    for m in range(0, 10):
        engine = _torus(m)
        if engine != two_strand_homfly(m):
            return f"sigma_1^{m}: skein {engine} vs matrix {two_strand_homfly(m)}"
    return None


def _check_mod2_invariance() -> Optional[str]:
    ring = CoefficientRing.integers_mod(2)
    for m in range(1, 10, 2):
        before = reduce_mod(specialize_z(two_strand_homfly(m), 0, ZZ), 2)
        after = reduce_mod(specialize_z(two_strand_homfly(m + 4), 0, ZZ), 2)
        if after != before * _a_power(4, ring):
            return f"T(2,{m + 4}) at z=0 mod 2 is {after}, expected a^4 ({before})"
    return None


def _check_single_move() -> Optional[str]:
    for k in range(3, 7):
        ring = CoefficientRing.cyclotomic(2 * k)
        _, z_k = zeta_twist_value(k)
        for m in range(1, 6, 2):
            before = specialize_z(two_strand_homfly(m), z_k, ring)
            after = specialize_z(two_strand_homfly(m + 2 * k), z_k, ring)
            if after != before * _a_power(2 * k, ring):
                return f"a t_{2 * k}-move on T(2,{m}) does not multiply by a^{2 * k}"
    return None


def _check_inverse_power() -> Optional[str]:
    for n in range(1, 5):
        product = twist_matrix_power(-n) @ twist_matrix_power(n)
        if not product.is_scalar(LaurentPoly2.constant(1)):
            return f"M^-{n} M^{n} is not the identity"
        if two_strand_homfly(-n) != homfly_of_braid(BraidWord(2, (-1,) * n)):
            return f"sigma_1^-{n}: matrix disagrees with the skein engine"
    return None


def _matrix_checks(k_max: int) -> List[Check]:
    return [
        ("M^2k = a^2k I over Q(zeta_2k)", lambda: _check_twist_power_scalar(k_max)),
        ("tr M = a z_k, det M = -a^2", lambda: _check_trace_det(k_max)),
        ("k=2: M^4 = a^4 I mod 4 at z = 2 zeta_4 only", _check_k2_mod4),
        ("k=2: M^4 != a^4 I at z_4 in Q(zeta_8)", _check_k2_zeta8),
        ("k=2: first row of M^5 at z = 2 zeta_4", _check_fifth_power_row),
        ("two-strand matrix agrees with the skein engine", _check_engine_vs_matrix),
        ("k=2: t_4-move multiplies P(a, 0) mod 2 by a^4", _check_mod2_invariance),
        ("t_2k-move multiplies P(a, z_k) by a^2k", _check_single_move),
        ("negative matrix powers", _check_inverse_power),
    ]


# Skein suite

def _expect(braid: str, expected: LaurentPoly2) -> Optional[str]:
    value = homfly_of_braid(parse_braid(braid))
    return None if value == expected else f"'{braid}': got {value}, expected {expected}"


def _check_hopf() -> Optional[str]:
    value = _A * _Z * homfly_of_braid(parse_braid("-1 -1"))
    expected = LaurentPoly2({(-2, 0): 1, (0, 0): -1, (0, 2): -1})
    return None if value == expected else f"a z P(H-) = {value}"


def _check_random_skein(samples: int, seed: int) -> Optional[str]:
    rng = random.Random(seed)
    for _ in range(samples):
        strands = rng.randint(2, 4)
        word = _word(rng, strands, rng.randint(0, 6))
        pos = rng.randint(0, len(word))
        g = rng.randint(1, strands - 1)
        plus = BraidWord(strands, tuple(word[:pos] + [g] + word[pos:]))
        minus = BraidWord(strands, tuple(word[:pos] + [-g] + word[pos:]))
        zero = BraidWord(strands, tuple(word))
        lhs = _A_INV * homfly_of_braid(plus) - _A * homfly_of_braid(minus)
        if lhs != _Z * homfly_of_braid(zero):
            return f"skein relation fails at {word} with sigma_{g} inserted at {pos}"
    return None


def _check_markov(samples: int, seed: int) -> Optional[str]:
    rng = random.Random(seed + 1)
    for _ in range(samples):
        strands = rng.randint(2, 4)
        word = _word(rng, strands, rng.randint(1, 6))
        value = homfly_of_braid(BraidWord(strands, tuple(word)))
        g = rng.choice((1, -1)) * rng.randint(1, strands - 1)
        conjugated = BraidWord(strands, tuple([g] + word + [-g]))
        stabilized = BraidWord(strands + 1, tuple(word + [rng.choice((1, -1)) * strands]))
        if homfly_of_braid(conjugated) != value:
            return f"conjugation of {word} by sigma_{g}"
        if homfly_of_braid(stabilized) != value:
            return f"stabilization of {word}"
    return None


def _check_twist_braids() -> Optional[str]:
    for n in range(0, 5):
        if homfly_of_braid(twist_knot_braid(n)) != twist_knot_homfly(n):
            return f"K_{n}: braid disagrees with the closed form"
    return None


def _check_torus_family() -> Optional[str]:
    for m in range(1, 12, 2):
        if _torus(m) != torus_homfly(m):
            return f"T(2,{m}): skein disagrees with the recursion"
    return None


def _check_twist_conway() -> Optional[str]:
    for n in range(0, 9):
        nabla = specialize_a(twist_knot_homfly(n), 1, ZZ)
        if nabla != LaurentPoly1({0: 1, 2: -n}):
            return f"Conway polynomial of K_{n} is {nabla}"
    return None


def _check_components(samples: int, seed: int) -> Optional[str]:
    rng = random.Random(seed + 2)
    for _ in range(samples):
        strands = rng.randint(1, 5)
        word = _word(rng, strands, rng.randint(0, 8)) if strands > 1 else []
        b = BraidWord(strands, tuple(word))
        if braid_to_diagram(b).components != closure_component_count(b):
            return f"component count of {word} on {strands} strands"
    return None


def _skein_checks(settings: Settings) -> List[Check]:
    samples, seed = settings.VERIFY_SAMPLES, settings.VERIFY_SEED
    trefoil = LaurentPoly2({(2, 0): 2, (4, 0): -1, (2, 2): 1})
    figure_eight = LaurentPoly2({(2, 0): 1, (-2, 0): 1, (0, 0): -1, (0, 2): -1})
    return [
        ("unknot", lambda: _expect("", LaurentPoly2.constant(1))),
        ("negative Hopf link", _check_hopf),
        ("trefoil", lambda: _expect("1 1 1", trefoil)),
        ("figure-eight", lambda: _expect("1 -2 1 -2", figure_eight)),
        ("skein relation on random words", lambda: _check_random_skein(samples, seed)),
        ("Markov invariance", lambda: _check_markov(20, seed)),
        ("twist knot braids", _check_twist_braids),
        ("two-strand torus knots", _check_torus_family),
        ("Conway polynomial of twist knots", _check_twist_conway),
        ("closure components", lambda: _check_components(samples, seed)),
    ]


# Knot-table suite

def _check_cardinality_bounds(k_max: int) -> Optional[str]:
    for record in load_table():
        P = homfly_of_braid(parse_braid(record.braid))
        t_report, tbar_report = candidate_sets(P, specialize_a(P, 1, ZZ), k_max, knot=record.name)
        attach_headline_bounds(t_report, tbar_report, record.crossing_number, record.braid_index, not P.is_one())
        for report in (t_report, tbar_report):
            for bound in report.bounds.values():
                if bound.applicable and not bound.holds:
                    return f"{record.name}: {bound.name} bound {bound.bound} < count {bound.count}"
    return None


def _check_fibred(k_max: int) -> Optional[str]:
    for record in load_table():
        nabla = specialize_a(homfly_of_braid(parse_braid(record.braid)), 1, ZZ)
        if not fibred_obstruction(nabla):
            continue
        open_k = [k for k in range(2, k_max + 1) if not fox_test(nabla, k).obstructed]
        if open_k:
            return f"{record.name}: fibred but Fox leaves k={open_k}"
    return None


def _check_self_and_fwm() -> Optional[str]:
    for record in load_table():
        P = homfly_of_braid(parse_braid(record.braid))
        if not specialize_z_skein_unit(P).is_one():
            return f"{record.name}: P(a, a^-1 - a) != 1"
        crossing_lb, braid_index_lb = fwm_bounds(P)
        if crossing_lb > record.crossing_number or braid_index_lb > record.braid_index:
            return f"{record.name}: FWM bounds ({crossing_lb}, {braid_index_lb}) exceed table values"
    return None


def _check_modp_shadow(per_k: int) -> Optional[str]:
    for k in range(3, 6):
        roots = dirichlet_primes(k, per_k)
        ring = CoefficientRing.cyclotomic(2 * k)
        _, z_k = zeta_twist_value(k)
        for record in load_table():
            P = homfly_of_braid(parse_braid(record.braid))
            exact = t_test(P, k)
            for column in modp_columns(P, k, roots, MoveFamily.T):
                if not exact.obstructed and column.obstructed:
                    return f"{record.name}: F_{column.p} obstructs k={k} where the cyclotomic test does not"
            for root in roots:
                reduced = reduce_poly_to_prime_field(specialize_z(P, z_k, ring), root)
                direct = specialize_z(P, root.N, CoefficientRing.prime_field(root.p))
                if reduced != direct:
                    return f"{record.name}: reduction to F_{root.p} does not commute with z := z_{k}"
    return None


def _check_two_bridge_braid_index(k_max: int) -> Optional[str]:
    """b(K) survives t_2k-moves for two-bridge K outside the exceptional k, and drops inside it"""
    if k_max < 3:
        return None
    for record in load_table():
        if not record.two_bridge:
            continue
        P = homfly_of_braid(parse_braid(record.braid))
        if P.is_one():
            continue
        exceptional = exceptional_k_set(P, k_max)
        for k in range(3, k_max + 1):
            bound = braid_index_lb_after_twist(P, k)
            if k in exceptional and bound >= record.braid_index:
                return f"{record.name}: exceptional k={k} keeps the bound {bound}"
            if k not in exceptional and bound != record.braid_index:
                return f"{record.name}: bound {bound} at k={k}, braid index {record.braid_index}"
    return None


def _table_checks(settings: Settings, k_max: int) -> List[Check]:
    return [
        ("table ingestion gates", lambda: None if load_table() else "empty table"),
        ("candidate-set cardinality bounds", lambda: _check_cardinality_bounds(k_max)),
        ("fibred knots are Fox-obstructed for every k", lambda: _check_fibred(k_max)),
        ("self-check and FWM bounds", _check_self_and_fwm),
        ("two-bridge braid index after t_2k-moves", lambda: _check_two_bridge_braid_index(k_max)),
        ("finite-field shadow", lambda: _check_modp_shadow(settings.MODP_PRIMES_PER_K)),
    ]


# Divisor-characterization suite

def _check_t225() -> Optional[str]:
    t_report, _ = candidate_sets(torus_homfly(25), specialize_a(torus_homfly(25), 1, ZZ), 30)
    if t_report.candidates() != [2, 3, 4, 6, 12, 13]:
        return f"T(2,25) t-candidates {t_report.candidates()}"
    return None


def _check_exceptional() -> Optional[str]:
    found = exceptional_k_set(torus_homfly(3), 20)
    if found != {4}:
        return f"exceptional k for the trefoil: {sorted(found)}"
    for n in range(1, 5):
        if exceptional_k_set(twist_knot_homfly(n), 20):
            return f"K_{n} has exceptional k"
    return None


def _check_lcm_exponent() -> Optional[str]:
    for n in range(1, 5):
        m = lcm_torus_exponent(n)
        inst = FamilyInstance.torus(m)
        for k in range(1, n + 1):
            if untwist_witness(inst, MoveFamily.T, k) is None:
                return f"T(2,{m}) has no t_{2 * k} witness"
        P = torus_homfly(m)
        blocked = [k for k in range(2, n + 1) if t_test(P, k).obstructed]
        if blocked:
            return f"T(2,{m}) obstructed at k={blocked}"
    return None


def _check_braid_index_profile() -> Optional[str]:
    for n in range(1, 5):
        profile = degree_profile(twist_knot_homfly(n))
        if (profile.a_min, profile.a_max) != (-2, 2 * n):
            return f"K_{n} a-range ({profile.a_min}, {profile.a_max})"
    return None


def _prop6_extra_checks() -> List[Check]:
    return [
        ("T(2,25) candidate set", _check_t225),
        ("exceptional k", _check_exceptional),
        ("lcm torus exponent", _check_lcm_exponent),
        ("twist knot a-range", _check_braid_index_profile),
    ]


class VerificationService:
    """Service running the named self-verification suites"""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()

    async def _run_check(self, name: str, fn: Callable[[], Optional[str]]) -> CheckResult:
        try:
            detail = await asyncio.to_thread(fn)
        except Exception as e:
            logger.error(f"Check '{name}' raised: {e}")
            return CheckResult(name=name, passed=False, detail=f"{type(e).__name__}: {e}")
        if detail is not None:
            logger.warning(f"Check '{name}' failed: {detail}")
        return CheckResult(name=name, passed=detail is None, detail=detail)

    async def _prop6_results(self, n_max: int, k_max: int) -> List[CheckResult]:
        try:
            report = await verify_prop6(n_max, k_max)
        except Exception as e:
            return [CheckResult(name="divisor characterization", passed=False, detail=f"{type(e).__name__}: {e}")]
        failures = report.failures()
        bad_index = [c for c in report.braid_index if not c.consistent]
        return [
            CheckResult(
                name="divisor characterization",
                passed=not failures,
                detail=f"{len(failures)} cells, first n={failures[0].n} k={failures[0].k}: {failures[0].detail}"
                if failures
                else None,
            ),
            CheckResult(
                name="post-twist braid index",
                passed=not bad_index,
                detail=f"K_{bad_index[0].n} at k={bad_index[0].k}: {bad_index[0].lower_bound}" if bad_index else None,
            ),
        ]

    async def run_suite(self, suite: str, n_max: int = 8, k_max: Optional[int] = None) -> SuiteReport:
        """
        Run one verification suite

        Args:
            suite: One of prop6, matrix, skein, fwm-table
            n_max: Largest family index for prop6
            k_max: Largest twist parameter (defaults to 20 for prop6, 10 for matrix, KMAX for fwm-table)

        Returns:
            SuiteReport: passed only when every check passed
        """
        if suite not in SUITES:
            raise UnknownSuiteError(f"unknown suite '{suite}', expected one of {', '.join(SUITES)}")
        logger.info(f"Running suite {suite}")

        results: List[CheckResult] = []
        if suite == "prop6":
            results.extend(await self._prop6_results(n_max, k_max or 20))
            checks = _prop6_extra_checks()
        elif suite == "matrix":
            checks = _matrix_checks(k_max or 10)
        elif suite == "skein":
            checks = _skein_checks(self.settings)
        else:
            checks = _table_checks(self.settings, k_max or self.settings.KMAX)

        results.extend(await asyncio.gather(*(self._run_check(name, fn) for name, fn in checks)))
        passed = all(r.passed for r in results)
        logger.info(f"Suite {suite}: {sum(r.passed for r in results)}/{len(results)} checks passed")
        return SuiteReport(suite=suite, passed=passed, checks=results)


# Global verification service instance
_verification_service: Optional[VerificationService] = None


def get_verification_service() -> VerificationService:
    """Get global verification service instance"""
    global _verification_service
    if _verification_service is None:
        _verification_service = VerificationService()
    return _verification_service
