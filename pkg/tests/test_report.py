import csv
import io
import json
import math

from hypothesis import given, strategies as st

from harmtwist.report import CHECK_COLUMNS, Check, VerificationReport

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


def test_passed_iff_within_tolerance():
    assert Check.compare("a", 1.0, 1.0 + 1e-9, 1e-8).passed
    assert not Check.compare("b", 1.0, 1.1, 1e-8).passed
    assert not Check.bound("nan", math.nan, 1.0).passed


@given(lhs=finite, rhs=finite, tol=st.floats(0, 1e3))
def test_check_invariant(lhs, rhs, tol):
    c = Check.compare("x", lhs, rhs, tol)
    assert c.passed == (c.residual <= tol)


@given(values=st.lists(st.tuples(finite, finite, st.floats(0, 1)), max_size=6))
def test_json_round_trip_is_lossless(values):
    rep = VerificationReport(metadata={"rho": 1.0, "grid": [8.0, 400]})
    for i, (a, b, tol) in enumerate(values):
        rep.add(Check.compare(f"c{i}", a, b, tol))
    back = VerificationReport.from_json(rep.to_json())
    assert back.checks == rep.checks and back.metadata == rep.metadata
    assert back.to_json() == rep.to_json()


def test_empty_report():
    rep = VerificationReport()
    assert rep.passed and json.loads(rep.to_json())["checks"] == []
    assert rep.to_csv().strip() == ",".join(CHECK_COLUMNS)


def test_csv_floats_round_trip():
    rep = VerificationReport([Check.compare("c", 0.1 + 0.2, 1 / 3, 1.0)])
    row = next(csv.DictReader(io.StringIO(rep.to_csv())))
    assert float(row["lhs"]) == 0.1 + 0.2 and float(row["rhs"]) == 1 / 3


def test_failures():
    rep = VerificationReport()
    rep.extend([Check.bound("ok", 0.0, 1.0), Check.bound("bad", 2.0, 1.0)])
    assert [c.name for c in rep.failures()] == ["bad"] and not rep.passed
