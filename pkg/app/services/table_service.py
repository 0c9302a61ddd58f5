import json
import logging
from pathlib import Path
from typing import List, Optional, Union

from pydantic import ValidationError

from app.algebra.poly import degree_profile
from app.core.config import get_settings
from app.core.exceptions import BraidParseError, DomainError, InvalidBraidError, TableIngestionError
from app.knots.braid import braid_to_diagram, parse_braid
from app.knots.homfly import homfly
from app.schemas.knots import KnotRecord
from app.services.obstruction import fwm_bounds

logger = logging.getLogger(__name__)


def _ingest(line: str, line_no: int, crossing_cap: Optional[int]) -> KnotRecord:
    try:
        record = KnotRecord.model_validate(json.loads(line))
    except (json.JSONDecodeError, ValidationError) as e:
        raise TableIngestionError(line_no, "parse", str(e).splitlines()[0])

    try:
        braid = parse_braid(record.braid)
    except (BraidParseError, InvalidBraidError) as e:
        raise TableIngestionError(line_no, "braid", str(e))

    diagram = braid_to_diagram(braid)
    if diagram.components != 1:
        raise TableIngestionError(line_no, "components", f"closure has {diagram.components} components")

    P = homfly(diagram, crossing_cap=crossing_cap)
    crossing_lb, braid_index_lb = fwm_bounds(P)
    if record.crossing_number < crossing_lb:
        raise TableIngestionError(
            line_no, "FWM crossing-number", f"{record.name}: declared {record.crossing_number} < lower bound {crossing_lb}"
        )
    if record.braid_index < braid_index_lb:
        raise TableIngestionError(
            line_no, "FWM braid-index", f"{record.name}: declared {record.braid_index} < lower bound {braid_index_lb}"
        )
    if record.two_bridge:
        span = degree_profile(P).a_span
        if 2 * record.braid_index != span + 2:
            raise TableIngestionError(
                line_no, "Murasugi equality", f"{record.name}: 2*{record.braid_index} != a-span {span} + 2"
            )
    return record


def load_table(path: Optional[Union[str, Path]] = None, crossing_cap: Optional[int] = None) -> List[KnotRecord]:
    """
    Load a JSON-lines knot table, re-deriving every checkable field

    Args:
        path: Table file (defaults to KNOT_TABLE_PATH)
        crossing_cap: Skein cap used while recomputing HOMFLY polynomials

    Returns:
        List[KnotRecord]: records in file order

    Raises:
        TableIngestionError: first failing line with the gate it failed
    """
    path = Path(path or get_settings().KNOT_TABLE_PATH)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise DomainError(f"cannot read knot table {path}: {e}")

    records = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        records.append(_ingest(line, line_no, crossing_cap))
    logger.info(f"Loaded {len(records)} knots from {path}")
    return records
