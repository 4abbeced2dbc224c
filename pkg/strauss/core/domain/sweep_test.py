import math

import pytest

from strauss.core.domain.errors import DataError
from strauss.core.domain.sweep import SweepTable, config_hash, format_number


def _table() -> SweepTable:
    table = SweepTable.create("fm-curve", ["e", "A"], {"e_min": 0.1, "e_max": 0.2})
    table.append(e=0.1, A=0.2)
    table.append_gap(e=0.15)
    table.append(e=0.2, A=1 / 3)
    return table


def test_format_number():
    assert format_number(0.1) == "0.10000000000000001"
    assert format_number(math.nan) == "nan"
    assert format_number(2.0) == "2"


def test_config_hash_is_order_independent():
    assert config_hash({"a": 1, "b": 2}) == config_hash({"b": 2, "a": 1})
    assert len(config_hash({"a": 1})) == 12
    assert config_hash({"a": 1}) != config_hash({"a": 2})


class TestSweepTable:
    def test_metadata(self):
        table = _table()
        assert table.metadata["kind"] == "fm-curve"
        assert table.metadata["e_min"] == "0.1"
        assert len(table.metadata["config_hash"]) == 12

    def test_append_rejects_wrong_columns(self):
        with pytest.raises(DataError):
            _table().append(e=0.3)

    def test_column(self):
        a = _table().column("A")
        assert a[0] == 0.2
        assert math.isnan(a[1])

    def test_unknown_column(self):
        with pytest.raises(DataError):
            _table().column("B")

    def test_complete_rows(self):
        assert len(_table().complete_rows()) == 2

    def test_gap_count_ignores_nan_values(self):
        table = SweepTable.create("classify", ["e", "S_oe", "S_bipodal"], {})
        table.append(e=0.1, S_oe=math.nan, S_bipodal=-0.3)
        assert table.gap_count() == 0
        table.append_gap(e=0.2)
        assert table.gap_count() == 1
        assert _table().gap_count() == 1

    def test_to_csv(self):
        lines = _table().to_csv().splitlines()
        assert lines[0] == "# kind: fm-curve"
        assert "e,A" in lines
        assert lines[-3:] == [
            "0.10000000000000001,0.20000000000000001",
            "0.14999999999999999,nan",
            "0.20000000000000001,0.33333333333333331",
        ]

    def test_csv_is_deterministic(self):
        assert _table().to_csv() == _table().to_csv()

    def test_from_csv(self):
        table = _table()
        parsed = SweepTable.from_csv(table.to_csv())
        assert parsed.kind == "fm-curve"
        assert parsed.metadata == table.metadata
        assert parsed.rows[0] == table.rows[0]
        assert parsed.rows[2] == table.rows[2]
        assert math.isnan(parsed.rows[1][1])

    def test_from_csv_without_header(self):
        with pytest.raises(DataError):
            SweepTable.from_csv("# kind: x\n")

    def test_json_writes_null_for_gaps(self):
        text = _table().to_json()
        assert "null" in text
        parsed = SweepTable.from_json(text)
        assert math.isnan(parsed.rows[1][1])
        assert parsed.rows[2] == [0.2, 1 / 3]

    def test_row_length_validated(self):
        with pytest.raises(DataError):
            SweepTable(kind="x", columns=["a", "b"], rows=[[1.0]])
