import logging
from pathlib import Path
from typing import List, Optional, Union

from app.algebra.cyclo import dirichlet_primes
from app.algebra.poly import ZZ, LaurentPoly2, degree_profile, specialize_a, specialize_z_skein_unit
from app.core.config import Settings, get_settings
from app.core.exceptions import DomainError, LinkNotKnotError
from app.knots.braid import Diagram, braid_to_diagram, format_braid, parse_braid
from app.knots.homfly import homfly
from app.schemas.knots import KnotRecord
from app.schemas.reports import (
    DegreeProfileModel,
    FwmBounds,
    InvariantsReport,
    ObstructionReport,
    TableEntry,
)
from app.services.obstruction import (
    attach_headline_bounds,
    candidate_sets,
    fibred_obstruction,
    fwm_bounds,
    modp_columns,
)
from app.services.table_service import load_table

logger = logging.getLogger(__name__)

MOVE_CHOICES = ("t", "tbar", "both")


def _profile_model(P: LaurentPoly2) -> DegreeProfileModel:
    return DegreeProfileModel(**degree_profile(P)._asdict())


class KnotService:
    """Service assembling invariant, obstruction and table reports from braid words"""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()

    def diagram(self, braid_text: str, allow_links: bool = False) -> Diagram:
        d = braid_to_diagram(parse_braid(braid_text))
        if d.components != 1 and not allow_links:
            raise LinkNotKnotError(d.components)
        return d

    def invariants(
        self, braid_text: str, allow_links: bool = False, crossing_cap: Optional[int] = None
    ) -> InvariantsReport:
        """
        HOMFLY and Conway polynomials of a braid closure with their degree data

        Args:
            braid_text: Braid word, e.g. "1 1 1" or "3: 1 -2"
            allow_links: Accept closures with more than one component
            crossing_cap: Skein cap (defaults to CROSSING_CAP)

        Returns:
            InvariantsReport: FWM bounds and the self-check are only filled for knots
        """
        d = self.diagram(braid_text, allow_links)
        P = homfly(d, crossing_cap=crossing_cap)
        nabla = specialize_a(P, 1, ZZ)

        bounds = None
        self_check = None
        if d.components == 1:
            crossing_lb, braid_index_lb = fwm_bounds(P)
            bounds = FwmBounds(crossing_lb=crossing_lb, braid_index_lb=braid_index_lb)
            self_check = specialize_z_skein_unit(P).is_one()
            if not self_check:
                logger.error(f"P(a, a^-1 - a) != 1 for '{braid_text}'")

        return InvariantsReport(
            braid=format_braid(d.braid),
            strands=d.braid.strands,
            components=d.components,
            homfly=P.to_json(),
            homfly_text=str(P),
            conway=nabla.to_json(),
            conway_text=str(nabla),
            profile=_profile_model(P),
            fwm_bounds=bounds,
            self_check=self_check,
        )

    def obstruct(
        self,
        braid_text: str,
        moves: str = "both",
        k_max: Optional[int] = None,
        modp: bool = False,
        name: Optional[str] = None,
        record: Optional[KnotRecord] = None,
        crossing_cap: Optional[int] = None,
    ) -> List[ObstructionReport]:
        """
        Per-k verdicts for the requested move families

        Args:
            braid_text: Braid word of a knot
            moves: "t", "tbar" or "both"
            k_max: Upper end of the scan (defaults to KMAX)
            modp: Attach finite-field columns for k >= 3
            name: Label for the reports (defaults to the braid word)
            record: Table record supplying c(K) and b(K) for the headline bounds
            crossing_cap: Skein cap (defaults to CROSSING_CAP)

        Returns:
            List[ObstructionReport]: [t], [tbar] or [t, tbar]
        """
        if moves not in MOVE_CHOICES:
            raise DomainError(f"moves must be one of {', '.join(MOVE_CHOICES)}, got '{moves}'")
        k_max = k_max if k_max is not None else self.settings.KMAX

        d = self.diagram(braid_text)
        P = homfly(d, crossing_cap=crossing_cap)
        nabla = specialize_a(P, 1, ZZ)
        label = name or (record.name if record else None) or format_braid(d.braid) or "unknot"

        t_report, tbar_report = candidate_sets(P, nabla, k_max, knot=label)
        if record is not None:
            attach_headline_bounds(t_report, tbar_report, record.crossing_number, record.braid_index, not P.is_one())

        reports = {"t": [t_report], "tbar": [tbar_report], "both": [t_report, tbar_report]}[moves]
        if modp:
            for report in reports:
                for verdict in report.verdicts:
                    if verdict.k >= 3:
                        roots = dirichlet_primes(verdict.k, self.settings.MODP_PRIMES_PER_K)
                        verdict.modp = modp_columns(P, verdict.k, roots, report.family)

        for report in reports:
            logger.info(f"{report.family.value}-moves on '{label}': candidates {report.candidates()}")
        return reports

    def table(self, path: Optional[Union[str, Path]] = None, crossing_cap: Optional[int] = None) -> List[TableEntry]:
        """Bundled (or given) knot table with the invariants recomputed for each entry"""
        entries = []
        for record in load_table(path, crossing_cap=crossing_cap):
            d = braid_to_diagram(parse_braid(record.braid))
            P = homfly(d, crossing_cap=crossing_cap)
            nabla = specialize_a(P, 1, ZZ)
            crossing_lb, braid_index_lb = fwm_bounds(P)
            entries.append(
                TableEntry(
                    record=record,
                    homfly_text=str(P),
                    conway_text=str(nabla),
                    profile=_profile_model(P),
                    fwm_bounds=FwmBounds(crossing_lb=crossing_lb, braid_index_lb=braid_index_lb),
                    fibred=fibred_obstruction(nabla),
                )
            )
        return entries

    def obstruct_record(
        self, record: KnotRecord, moves: str = "both", k_max: Optional[int] = None, modp: bool = False
    ) -> List[ObstructionReport]:
        return self.obstruct(record.braid, moves=moves, k_max=k_max, modp=modp, record=record)


# Global knot service instance
_knot_service: Optional[KnotService] = None


def get_knot_service() -> KnotService:
    """Get global knot service instance"""
    global _knot_service
    if _knot_service is None:
        _knot_service = KnotService()
    return _knot_service
