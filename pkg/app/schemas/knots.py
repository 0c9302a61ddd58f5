from enum import Enum
from pydantic import BaseModel, ConfigDict, Field


class FamilyKind(str, Enum):
    TORUS2 = "torus2"
    TWIST = "twist"


class MoveFamily(str, Enum):
    T = "t"
    TBAR = "tbar"


# FiniteFieldRoot schema: a primitive 2k-th root of unity in F_p
class FiniteFieldRoot(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: int
    k: int
    zeta: int
    N: int


# KnotRecord schema: one line of the knot table
class KnotRecord(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    name: str
    braid: str
    crossing_number: int = Field(alias="crossing-number", ge=0)
    braid_index: int = Field(alias="braid-index", ge=1)
    two_bridge: bool = Field(alias="two-bridge")
