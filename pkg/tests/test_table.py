"""
Tests for knot-table ingestion and its consistency gates
"""
import pytest

from app.core.exceptions import DomainError, TableIngestionError
from app.services.table_service import load_table

TREFOIL = {"name": "3_1", "braid": "1 1 1", "crossing-number": 3, "braid-index": 2, "two-bridge": True}
FIGURE_EIGHT = {"name": "4_1", "braid": "1 -2 1 -2", "crossing-number": 4, "braid-index": 3, "two-bridge": True}


class TestBundledTable:

    def test_loads(self, bundled_records):
        records = load_table()
        assert [r.name for r in records] == [raw["name"] for raw in bundled_records]
        assert len(records) == 11

    def test_aliases(self):
        trefoil = load_table()[0]
        assert trefoil.crossing_number == 3
        assert trefoil.braid_index == 2
        assert trefoil.two_bridge
        assert trefoil.model_dump(by_alias=True)["crossing-number"] == 3


class TestIngestionGates:
    """Each failing line names its line number and gate"""

    def test_accepts_good_lines(self, write_table):
        records = load_table(write_table([TREFOIL, "", FIGURE_EIGHT]))
        assert [r.name for r in records] == ["3_1", "4_1"]

    def _gate(self, path):
        with pytest.raises(TableIngestionError) as exc_info:
            load_table(path)
        return exc_info.value

    def test_parse_gate(self, write_table):
        error = self._gate(write_table([TREFOIL, "{not json"]))
        assert (error.line, error.gate) == (2, "parse")

    def test_missing_field(self, write_table):
        record = dict(TREFOIL)
        del record["braid-index"]
        error = self._gate(write_table([record]))
        assert error.gate == "parse"

    def test_braid_gate(self, write_table):
        error = self._gate(write_table([dict(TREFOIL, braid="1 x 1")]))
        assert (error.line, error.gate) == (1, "braid")

    def test_components_gate(self, write_table):
        error = self._gate(write_table([dict(TREFOIL, braid="1 1")]))
        assert error.gate == "components"

    def test_crossing_number_gate(self, write_table):
        error = self._gate(write_table([dict(TREFOIL, **{"crossing-number": 2})]))
        assert error.gate == "FWM crossing-number"

    def test_braid_index_gate(self, write_table):
        error = self._gate(write_table([TREFOIL, dict(FIGURE_EIGHT, **{"braid-index": 2})]))
        assert (error.line, error.gate) == (2, "FWM braid-index")
        assert "gate 'FWM braid-index'" in str(error)

    def test_murasugi_gate(self, write_table):
        error = self._gate(write_table([dict(TREFOIL, **{"braid-index": 3})]))
        assert error.gate == "Murasugi equality"

    def test_murasugi_gate_skips_non_two_bridge(self, write_table):
        records = load_table(write_table([dict(TREFOIL, **{"braid-index": 3, "two-bridge": False})]))
        assert records[0].braid_index == 3

    def test_blank_lines_keep_numbering(self, write_table):
        error = self._gate(write_table(["", "   ", dict(TREFOIL, braid="1 1")]))
        assert error.line == 3

    def test_missing_file(self, tmp_path):
        with pytest.raises(DomainError):
            load_table(tmp_path / "absent.jsonl")
