"""
Tests for the t_2k / tbar_2k obstructions and the FWM bounds
"""
import pytest

from app.algebra.cyclo import dirichlet_primes, find_finite_field_root
from app.algebra.poly import ZZ, LaurentPoly1, LaurentPoly2, specialize_a
from app.core.exceptions import DomainError, InternalConsistencyError, RingMismatchError
from app.schemas.knots import MoveFamily
from app.services.families import twist_knot_homfly
from app.services.obstruction import (
    attach_headline_bounds,
    braid_index_lb_after_twist,
    candidate_sets,
    exceptional_k_set,
    fibred_obstruction,
    fox_test,
    fused_tbar_verdict,
    fwm_bounds,
    modp_columns,
    t_test,
    t_test_modp,
    tbar_test,
    tbar_test_modp,
)


def nabla_of(P: LaurentPoly2) -> LaurentPoly1:
    return specialize_a(P, 1, ZZ)


class TestFoxTest:
    """Conway polynomial mod k"""

    def test_trefoil_is_obstructed_for_every_k(self, trefoil):
        for k in range(2, 12):
            verdict = fox_test(nabla_of(trefoil), k)
            assert verdict.obstructed and verdict.test == "fox"
            assert verdict.certificate is not None

    def test_twist_knot_passes_when_k_divides_n(self):
        nabla = nabla_of(twist_knot_homfly(2))
        assert nabla == LaurentPoly1({0: 1, 2: -2})
        assert not fox_test(nabla, 2).obstructed
        assert fox_test(nabla, 3).obstructed

    def test_k_must_be_at_least_2(self, trefoil):
        with pytest.raises(DomainError):
            fox_test(nabla_of(trefoil), 1)

    def test_fibred_obstruction(self, trefoil, figure_eight, unknot):
        assert fibred_obstruction(nabla_of(trefoil))
        assert fibred_obstruction(nabla_of(figure_eight))
        assert not fibred_obstruction(nabla_of(twist_knot_homfly(2)))
        assert not fibred_obstruction(nabla_of(unknot))


class TestTbarTest:
    """P(zeta_2k, z) = 1 is necessary for tbar_2k-unknotting"""

    def test_trefoil_at_i(self, trefoil):
        verdict = tbar_test(trefoil, 2)
        assert verdict.obstructed
        assert verdict.test == "homfly-a"

    def test_unknot_passes(self, unknot):
        for k in range(2, 8):
            assert not tbar_test(unknot, k).obstructed

    def test_twist_knot_k2(self):
        P = twist_knot_homfly(2)
        assert not tbar_test(P, 2).obstructed
        verdict = fused_tbar_verdict(P, nabla_of(P), 2)
        assert not verdict.obstructed
        assert verdict.test == "fox+homfly-a"

    def test_fused_verdict_reports_fox_first(self, figure_eight):
        verdict = fused_tbar_verdict(figure_eight, nabla_of(figure_eight), 3)
        assert verdict.obstructed and verdict.test == "fox"


class TestTTest:
    """P(a, z_k) must be a power of a^2k (mod-2 shadow at k = 2)"""

    def test_trefoil(self, trefoil):
        k2 = t_test(trefoil, 2)
        assert not k2.obstructed and k2.test == "mod-2"
        for k in range(3, 15):
            verdict = t_test(trefoil, k)
            assert verdict.obstructed and verdict.test == "cyclotomic"

    def test_unknot_passes(self, unknot):
        for k in range(2, 10):
            assert not t_test(unknot, k).obstructed

    def test_figure_eight_is_obstructed(self, figure_eight):
        assert all(t_test(figure_eight, k).obstructed for k in range(2, 12))


class TestFiniteFieldShadows:

    def test_trefoil_over_f7(self, trefoil):
        root = find_finite_field_root(3)
        verdict = t_test_modp(trefoil, 3, root)
        assert verdict.p == 7 and verdict.obstructed
        assert verdict.certificate == [[2, "6"], [4, "6"]]

    def test_t_shadow_needs_k_at_least_3(self, trefoil):
        with pytest.raises(DomainError):
            t_test_modp(trefoil, 2, find_finite_field_root(2))

    def test_root_must_match_k(self, trefoil):
        with pytest.raises(RingMismatchError):
            t_test_modp(trefoil, 4, find_finite_field_root(3))
        with pytest.raises(RingMismatchError):
            tbar_test_modp(trefoil, 2, find_finite_field_root(3))

    def test_tbar_shadow(self, trefoil, unknot):
        root = find_finite_field_root(2)
        assert tbar_test_modp(trefoil, 2, root).obstructed
        assert not tbar_test_modp(unknot, 2, root).obstructed

    def test_modp_columns(self, trefoil):
        columns = modp_columns(trefoil, 3, dirichlet_primes(3, 2), MoveFamily.T)
        assert [c.p for c in columns] == [7, 13]
        assert all(c.obstructed for c in columns)

    def test_exact_pass_implies_shadow_pass(self):
        P = twist_knot_homfly(3)
        for k in (3, 4, 5):
            exact = tbar_test(P, k)
            for root in dirichlet_primes(k, 2):
                if not exact.obstructed:
                    assert not tbar_test_modp(P, k, root).obstructed


class TestCandidateSets:
    """Per-k verdicts over 2..k_max with the cardinality bounds"""

    def test_trefoil_t_candidates(self, trefoil):
        t_report, tbar_report = candidate_sets(trefoil, nabla_of(trefoil), 20, knot="3_1")
        assert t_report.family is MoveFamily.T
        assert t_report.candidates() == [2]
        assert tbar_report.candidates() == []
        assert t_report.bounds["deg_z"].holds
        assert tbar_report.bounds["a_span/2"].holds

    def test_figure_eight_has_no_candidates(self, figure_eight):
        t_report, tbar_report = candidate_sets(figure_eight, nabla_of(figure_eight), 20)
        assert t_report.candidates() == []
        assert tbar_report.candidates() == []

    def test_bounds_inapplicable_for_unknot_polynomial(self, unknot):
        t_report, tbar_report = candidate_sets(unknot, nabla_of(unknot), 10)
        assert t_report.candidates() == list(range(2, 11))
        assert not t_report.bounds["deg_z"].applicable
        assert t_report.bounds["deg_z"].bound is None
        assert not tbar_report.bounds["a_span/2"].applicable

    def test_headline_bounds(self, trefoil):
        t_report, tbar_report = candidate_sets(trefoil, nabla_of(trefoil), 20)
        attach_headline_bounds(t_report, tbar_report, 3, 2, applicable=True)
        assert t_report.bounds["c-1"].bound == 2 and t_report.bounds["c-1"].holds
        assert tbar_report.bounds["b-1"].bound == 1 and tbar_report.bounds["b-1"].holds

    def test_k_max_floor(self, trefoil):
        with pytest.raises(DomainError):
            candidate_sets(trefoil, nabla_of(trefoil), 1)

    def test_report_carries_the_necessary_condition_note(self, trefoil):
        t_report, _ = candidate_sets(trefoil, nabla_of(trefoil), 5)
        assert "necessary condition" in t_report.note


class TestFwmBounds:

    def test_known_knots(self, trefoil, figure_eight, unknot):
        assert fwm_bounds(trefoil) == (3, 2)
        assert fwm_bounds(figure_eight) == (3, 3)
        assert fwm_bounds(unknot) == (1, 1)
        assert fwm_bounds(twist_knot_homfly(2)) == (3, 4)

    def test_odd_span_is_inconsistent(self):
        with pytest.raises(InternalConsistencyError):
            fwm_bounds(LaurentPoly2({(0, 0): 1, (1, 0): 1}))


class TestBraidIndexAfterTwist:
    """a-span of P(a, z_k) bounds the braid index of every t_2k-equivalent knot"""

    def test_trefoil(self, trefoil):
        assert braid_index_lb_after_twist(trefoil, 3) == 2
        assert braid_index_lb_after_twist(trefoil, 4) == 1

    def test_twist_knots(self):
        for n in range(1, 5):
            assert braid_index_lb_after_twist(twist_knot_homfly(n), 5) == n + 2

    def test_needs_k_at_least_3(self, trefoil):
        with pytest.raises(DomainError):
            braid_index_lb_after_twist(trefoil, 2)

    def test_exceptional_k_of_trefoil(self, trefoil):
        assert exceptional_k_set(trefoil, 20) == {4}

    def test_exceptional_set_range(self, trefoil):
        assert exceptional_k_set(trefoil, 3) == set()
        with pytest.raises(DomainError):
            exceptional_k_set(trefoil, 2)
