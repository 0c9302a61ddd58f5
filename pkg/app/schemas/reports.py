from typing import Any, Dict, List, Optional
from pydantic import BaseModel, Field

from app.schemas.knots import FamilyKind, KnotRecord, MoveFamily

NECESSARY_CONDITION_NOTE = (
    "obstructed means excluded by an invariant; not obstructed is a necessary condition only, "
    "never a proof that the moves unknot the knot"
)


# ModpVerdict schema: one finite-field column of a verdict
class ModpVerdict(BaseModel):
    p: int
    obstructed: bool
    certificate: Optional[Any] = None


# Verdict schema: outcome for one k
class Verdict(BaseModel):
    k: int
    obstructed: bool
    test: str
    certificate: Optional[Any] = None
    modp: List[ModpVerdict] = Field(default_factory=list)


# BoundCheck schema: a cardinality bound on the not-obstructed k
class BoundCheck(BaseModel):
    name: str
    bound: Optional[int] = None
    count: int
    applicable: bool
    holds: Optional[bool] = None


# ObstructionReport schema
class ObstructionReport(BaseModel):
    knot: str
    family: MoveFamily
    k_min: int
    k_max: int
    verdicts: List[Verdict]
    bounds: Dict[str, BoundCheck] = Field(default_factory=dict)
    note: str = NECESSARY_CONDITION_NOTE

    def candidates(self) -> List[int]:
        """The k left open by every test"""
        return sorted(v.k for v in self.verdicts if not v.obstructed)


class DegreeProfileModel(BaseModel):
    z_degree: int
    a_span: int
    a_min: int
    a_max: int


class FwmBounds(BaseModel):
    crossing_lb: int
    braid_index_lb: int


# InvariantsReport schema
class InvariantsReport(BaseModel):
    braid: str
    strands: int
    components: int
    homfly: List[List[Any]]
    homfly_text: str
    conway: List[List[Any]]
    conway_text: str
    profile: DegreeProfileModel
    fwm_bounds: Optional[FwmBounds] = None
    self_check: Optional[bool] = None


class FamilyInstanceRef(BaseModel):
    kind: FamilyKind
    parameter: int
    braid: str


class Move(BaseModel):
    family: MoveFamily
    k: int
    direction: int
    location: str


# MoveSequence schema: a constructive untwisting witness
class MoveSequence(BaseModel):
    start: FamilyInstanceRef
    moves: List[Move]
    end: str = "unknot"


class Prop6Cell(BaseModel):
    family: FamilyKind
    moves: MoveFamily
    n: int
    k: int
    expected: bool
    witness: Optional[bool] = None
    obstructed: Optional[bool] = None
    consistent: bool
    detail: Optional[str] = None


class BraidIndexCell(BaseModel):
    n: int
    k: int
    lower_bound: int
    expected: int
    consistent: bool


# Prop6Report schema: divisor characterization over the (n, k) grid
class Prop6Report(BaseModel):
    n_max: int
    k_max: int
    cells: List[Prop6Cell]
    braid_index: List[BraidIndexCell]
    passed: bool

    def failures(self) -> List[Prop6Cell]:
        return [c for c in self.cells if not c.consistent]


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: Optional[str] = None


# SuiteReport schema
class SuiteReport(BaseModel):
    suite: str
    passed: bool
    checks: List[CheckResult]


class TableEntry(BaseModel):
    record: KnotRecord
    homfly_text: str
    conway_text: str
    profile: DegreeProfileModel
    fwm_bounds: FwmBounds
    fibred: bool
