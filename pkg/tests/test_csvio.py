"""Strict CSV dialect: parsing, role assignment, exact round trips."""

import io

import numpy as np
import pytest

from varsearch import (
    CsvError,
    DuplicateNameError,
    EmptyCsvError,
    InvalidHeaderError,
    MissingColumnError,
    NonNumericCellError,
    RaggedRowError,
    Role,
    format_csv,
    load_dataset,
    load_future_matrix,
    read_matrix_csv,
    write_csv,
)


def parse(text):
    return read_matrix_csv(io.StringIO(text))


class TestReadMatrix:
    def test_two_by_two(self):
        names, matrix = parse("t1,t2\n1,10\n2,20\n")
        assert names == ("t1", "t2")
        np.testing.assert_array_equal(matrix, [[1.0, 10.0], [2.0, 20.0]])

    def test_non_numeric_cell_names_row_and_column(self):
        with pytest.raises(NonNumericCellError) as excinfo:
            parse("a,b\n1,2\nabc,4\n")
        assert excinfo.value.row == 3
        assert excinfo.value.column == "a"
        assert excinfo.value.text == "abc"

    def test_non_finite_cell_rejected(self):
        for bad in ("nan", "inf", "-inf", "Infinity"):
            with pytest.raises(NonNumericCellError):
                parse(f"a\n1\n{bad}\n")

    def test_duplicate_header(self):
        with pytest.raises(DuplicateNameError) as excinfo:
            parse("x,x\n1,2\n")
        assert excinfo.value.name == "x"

    def test_invalid_header_name(self):
        for header in ("a b", "a-b", "a,"):
            with pytest.raises(InvalidHeaderError):
                parse(f"{header}\n1,2\n")
        with pytest.raises(EmptyCsvError):
            parse("\n1,2\n")

    def test_ragged_row(self):
        with pytest.raises(RaggedRowError) as excinfo:
            parse("a,b\n1,2\n3\n")
        assert excinfo.value.row == 3
        assert (excinfo.value.expected, excinfo.value.found) == (2, 1)

    def test_empty_file_and_headerless_data(self):
        with pytest.raises(EmptyCsvError):
            parse("")
        with pytest.raises(EmptyCsvError):
            parse("a,b\n")

    def test_blank_lines_are_skipped(self):
        names, matrix = parse("a\n1\n\n2\n")
        np.testing.assert_array_equal(matrix, [[1.0], [2.0]])

    def test_reads_from_path(self, tmp_path):
        target = tmp_path / "data.csv"
        target.write_text("v\n1.5\n2.5\n", encoding="utf-8")
        names, matrix = read_matrix_csv(target)
        assert names == ("v",)
        np.testing.assert_array_equal(matrix, [[1.5], [2.5]])


class TestRoles:
    CSV = "y,z,w\n1,2,3\n4,5,6\n7,8,9\n"

    def test_default_everything_dependent(self):
        ds = load_dataset(io.StringIO(self.CSV))
        assert ds.roles == (Role.DEPENDENT,) * 3

    def test_dependent_list_sends_rest_independent(self):
        ds = load_dataset(io.StringIO(self.CSV), dependent=["y"])
        assert ds.roles == (Role.DEPENDENT, Role.INDEPENDENT, Role.INDEPENDENT)

    def test_independent_list_sends_rest_dependent(self):
        ds = load_dataset(io.StringIO(self.CSV), independent=["w"])
        assert ds.roles == (Role.DEPENDENT, Role.DEPENDENT, Role.INDEPENDENT)

    def test_both_lists_must_partition(self):
        ds = load_dataset(
            io.StringIO(self.CSV), dependent=["y", "w"], independent=["z"]
        )
        assert ds.roles == (Role.DEPENDENT, Role.INDEPENDENT, Role.DEPENDENT)
        with pytest.raises(CsvError, match="neither role"):
            load_dataset(io.StringIO(self.CSV), dependent=["y"], independent=["z"])

    def test_overlap_rejected(self):
        with pytest.raises(CsvError, match="both"):
            load_dataset(
                io.StringIO(self.CSV), dependent=["y", "z"], independent=["z", "w"]
            )

    def test_unknown_name(self):
        with pytest.raises(MissingColumnError) as excinfo:
            load_dataset(io.StringIO(self.CSV), dependent=["nope"])
        assert excinfo.value.name == "nope"


class TestFutureMatrix:
    def test_reorders_to_expected(self):
        out = load_future_matrix(
            io.StringIO("b,a\n1,2\n3,4\n"), expected_names=["a", "b"]
        )
        np.testing.assert_array_equal(out, [[2.0, 1.0], [4.0, 3.0]])

    def test_missing_expected_column(self):
        with pytest.raises(MissingColumnError):
            load_future_matrix(io.StringIO("a\n1\n"), expected_names=["a", "b"])

    def test_extra_column_rejected(self):
        with pytest.raises(CsvError, match="unexpected"):
            load_future_matrix(
                io.StringIO("a,b,c\n1,2,3\n"), expected_names=["a", "b"]
            )


class TestWriting:
    def test_round_trip_is_bit_exact(self, tmp_path):
        rng = np.random.default_rng(0)
        matrix = rng.normal(size=(40, 3)) * 10.0 ** rng.integers(-8, 9, size=(40, 3))
        target = tmp_path / "round.csv"
        write_csv(target, ("a", "b", "c"), matrix)
        names, back = read_matrix_csv(target)
        assert names == ("a", "b", "c")
        assert back.tobytes() == matrix.tobytes()

    def test_format_matches_write(self, tmp_path):
        matrix = np.array([[1.0, 2.5]])
        target = tmp_path / "fmt.csv"
        write_csv(target, ("a", "b"), matrix)
        assert target.read_text(encoding="utf-8") == format_csv(("a", "b"), matrix)

    def test_format_rejects_bad_names(self):
        with pytest.raises(InvalidHeaderError):
            format_csv(("ok", "not ok"), np.zeros((1, 2)))
