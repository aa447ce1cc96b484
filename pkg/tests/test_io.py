import json

import numpy as np
import pytest

from kposi.errors import ParseError
from kposi.io import (
    file_digest,
    format_matrix_csv,
    format_matrix_json,
    parse_matrix,
    parse_vector,
    read_matrix,
    trace_to_csv,
    write_matrix,
)
from kposi.dynamics import simulate
from kposi.tolerances import ToleranceProfile


def test_csv_roundtrip(tmp_path, rng):
    A = rng.standard_normal((3, 4))
    for fmt in ("csv", "json"):
        p = tmp_path / f"a.{fmt}"
        write_matrix(A, p, fmt)
        np.testing.assert_array_equal(read_matrix(p), A)


def test_json_format():
    d = json.loads(format_matrix_json(np.eye(2)))
    assert d == {"rows": 2, "cols": 2, "data": [[1.0, 0.0], [0.0, 1.0]]}
    assert parse_matrix(format_matrix_csv(np.eye(2))).shape == (2, 2)


def test_ragged_rows_report_line():
    with pytest.raises(ParseError, match="line 2"):
        parse_matrix("1,2\n3\n")


def test_non_numeric_reports_column():
    with pytest.raises(ParseError) as err:
        parse_matrix("1,2\n3,x\n")
    assert err.value.line == 2 and err.value.column == 2


@pytest.mark.parametrize("text", ["", "1,nan\n", '{"rows": 2, "cols": 1, "data": [[1]]}'])
def test_bad_inputs(text):
    with pytest.raises(ParseError):
        parse_matrix(text)


def test_vector_forms():
    np.testing.assert_array_equal(parse_vector("1,-2,3\n"), [1, -2, 3])
    np.testing.assert_array_equal(parse_vector("1\n-2\n3\n"), [1, -2, 3])


def test_digest_is_stable(tmp_path):
    p = tmp_path / "m.csv"
    p.write_text("1,2\n3,4\n")
    assert file_digest(p) == file_digest(p)
    assert file_digest(p).startswith("sha256:")


def test_trace_csv_columns():
    tr = simulate(np.eye(3), [1, -1, 1], 2)
    lines = trace_to_csv(tr).strip().splitlines()
    assert lines[0] == "j,x_1,x_2,x_3,s_minus,s_plus"
    assert len(lines) == 4
    assert lines[1].endswith(",2,2")


def test_tolerance_profile_file(tmp_path, monkeypatch):
    p = tmp_path / "tol.txt"
    p.write_text("# strict\ntau_zero = 1e-12\n\ntau_rate=0.1\n")
    prof = ToleranceProfile.from_file(p)
    assert prof.tau_zero == 1e-12 and prof.tau_rate == 0.1 and prof.tau_spec == 1e-6
    monkeypatch.setenv("KPOSI_TOL_PROFILE", str(p))
    assert ToleranceProfile.resolve(tau_rate=0.2).tau_rate == 0.2
    assert ToleranceProfile.resolve().tau_zero == 1e-12


def test_tolerance_profile_errors(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("tau_zero=1e-9\nnonsense\n")
    with pytest.raises(ParseError, match="line 2"):
        ToleranceProfile.from_file(p)
    with pytest.raises(ValueError):
        ToleranceProfile(tau_zero=0.0)
