"""
checks/c06_runner/test_persistence.py

CHECK: Results survive a CSV round trip exactly, and malformed files are
       rejected with the line and column of the problem.

WHAT IS CHECKED:
    1. Empty table → header-only file
    2. load(persist(t)) == t, failed rows and their sidecar diagnostics included
    3. 17 significant digits on every real
    4. Range, enum, header, column-count and duplicate violations
    5. Truncated last lines are dropped only when asked

RUN:
    pytest checks/c06_runner/test_persistence.py -v
"""

import pytest

from data.sample_results import three_row_fixture
from src.errors import ResultsParseError
from src.runner import RESULTS_HEADER, ResultsTable, failures_path, load, persist

pytestmark = pytest.mark.runner

HEADER = ",".join(RESULTS_HEADER)
GOOD_ROW = "0,rand1,bin,saturation,5,0.050000000000000003,0.050000000000000003,0,12345,0.0001,0.25,30000"


def _write(path, *lines, newline_at_end=True):
    path.write_text("\n".join(lines) + ("\n" if newline_at_end else ""))
    return path


class TestRoundTrip:

    def test_empty_table_is_header_only(self, tmp_path):
        path = tmp_path / "results.csv"
        persist(ResultsTable(), path)
        assert path.read_text() == HEADER + "\n"
        assert len(load(path)) == 0

    def test_three_row_fixture(self, tmp_path):
        path = tmp_path / "results.csv"
        table = ResultsTable(rows=three_row_fixture())
        persist(table, path)
        loaded = load(path)

        assert loaded == table.sorted()
        assert loaded.rows[-1].failed
        assert "non-finite" in loaded.rows[-1].error
        assert failures_path(path).exists()

    def test_reals_use_17_significant_digits(self, tmp_path):
        path = tmp_path / "results.csv"
        persist(ResultsTable(rows=three_row_fixture()), path)
        text = path.read_text()
        assert "0.30000000000000004" in text
        assert "0.33333333333333331" in text
        assert "0.26600000000000001" in text

    def test_failed_row_fields_are_empty(self, tmp_path):
        path = tmp_path / "results.csv"
        persist(ResultsTable(rows=three_row_fixture()), path)
        last = path.read_text().splitlines()[-1]
        assert last.split(",")[9:11] == ["", ""]
        assert last.endswith(",0")

    def test_rows_are_written_sorted(self, tmp_path):
        path = tmp_path / "results.csv"
        persist(ResultsTable(rows=list(reversed(three_row_fixture()))), path)
        keys = [r.key for r in load(path).rows]
        assert keys == sorted(keys)

    def test_sidecar_removed_when_no_failures(self, tmp_path):
        path = tmp_path / "results.csv"
        persist(ResultsTable(rows=three_row_fixture()), path)
        persist(ResultsTable(rows=three_row_fixture()[:2]), path)
        assert not failures_path(path).exists()

    def test_persist_twice_is_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        persist(ResultsTable(rows=three_row_fixture()), a)
        persist(ResultsTable(rows=list(reversed(three_row_fixture()))), b)
        assert a.read_bytes() == b.read_bytes()


class TestMalformedFiles:

    def test_pois_out_of_range(self, tmp_path):
        """pois = 1.3 is refused, naming line 2 and the pois column."""
        bad = GOOD_ROW.replace(",0.0001,", ",1.3,")
        path = _write(tmp_path / "r.csv", HEADER, bad)
        with pytest.raises(ResultsParseError) as err:
            load(path)
        assert err.value.line == 2
        assert err.value.column == "pois"
        assert "line 2, column 'pois'" in str(err.value)

    @pytest.mark.parametrize("column,old,new", [
        ("F", ",0.050000000000000003,0.050000000000000003,", ",2.5,0.050000000000000003,"),
        ("Cr", ",0.050000000000000003,0.050000000000000003,", ",0.050000000000000003,1.5,"),
        ("strategy", ",saturation,", ",dismiss,"),
        ("N", ",5,", ",five,"),
        ("evaluations_used", ",30000", ",-1"),
    ])
    def test_field_errors_name_their_column(self, tmp_path, column, old, new):
        path = _write(tmp_path / "r.csv", HEADER, GOOD_ROW, GOOD_ROW.replace("0,rand1", "1,rand1", 1).replace(old, new))
        with pytest.raises(ResultsParseError) as err:
            load(path)
        assert err.value.line == 3
        assert err.value.column == column

    def test_wrong_header(self, tmp_path):
        path = _write(tmp_path / "r.csv", HEADER.replace("pois", "POIS"), GOOD_ROW)
        with pytest.raises(ResultsParseError) as err:
            load(path)
        assert err.value.line == 1

    def test_missing_column(self, tmp_path):
        path = _write(tmp_path / "r.csv", HEADER, GOOD_ROW.rsplit(",", 1)[0])
        with pytest.raises(ResultsParseError, match="expected 12 columns"):
            load(path)

    def test_duplicate_key(self, tmp_path):
        path = _write(tmp_path / "r.csv", HEADER, GOOD_ROW, GOOD_ROW)
        with pytest.raises(ResultsParseError, match="duplicate"):
            load(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "r.csv"
        path.write_text("")
        with pytest.raises(ResultsParseError):
            load(path)

    @pytest.mark.parametrize("bad_line", ["nine,0,boom", "9,0"])
    def test_malformed_failures_sidecar(self, tmp_path, bad_line):
        """A damaged sidecar is a parse error naming the sidecar and its line."""
        path = tmp_path / "results.csv"
        persist(ResultsTable(rows=three_row_fixture()), path)
        failures_path(path).write_text("config_id,run_index,message\n" + bad_line + "\n")
        with pytest.raises(ResultsParseError) as err:
            load(path)
        assert err.value.line == 2
        assert "results.csv.failures.csv" in str(err.value)


class TestTruncatedTail:

    def test_unterminated_line_rejected_by_default(self, tmp_path):
        path = _write(tmp_path / "r.csv", HEADER, GOOD_ROW, GOOD_ROW[:20].replace("0,", "1,", 1), newline_at_end=False)
        with pytest.raises(ResultsParseError):
            load(path)

    def test_unterminated_line_dropped_on_request(self, tmp_path):
        """A row cut short mid-number is dropped, never read as a shorter number."""
        cut = GOOD_ROW.replace("0,rand1", "1,rand1", 1)[:-3]
        path = _write(tmp_path / "r.csv", HEADER, GOOD_ROW, cut, newline_at_end=False)
        table = load(path, allow_truncated_tail=True)
        assert [r.key for r in table.rows] == [(0, 0)]
