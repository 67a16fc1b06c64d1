import pytest
from hypothesis import given
from hypothesis import strategies as st

from armkit.errors import ConfigError, InvalidParameterError
from armkit.report import (CLAIMED_FINAL_ERROR_PCT, CLAIMED_TESTING_ERROR_PCT, error_report,
                           read_pairs, sample_pairs)

# bundled rotation table as printed: joint, theoretical, measured (degrees)
TABLE6 = [("Base", 355, 350), ("Shoulder", 45, 52), ("Elbow", 40, 50),
          ("Wrist", 50, 45), ("Waist", 38, 36), ("Claw", 23, 20)]


def test_bundled_table_is_transcription():
    assert sample_pairs() == [(n, float(t), float(m)) for n, t, m in TABLE6]


def test_base_row():
    rep = error_report([("Base", 355, 350)])
    assert rep.rows[0].rel_error_pct == pytest.approx(500 / 355)
    assert round(rep.rows[0].rel_error_pct, 2) == 1.41


def test_full_table():
    rep = error_report(sample_pairs())
    # |m - t| / t by hand: 5/355, 7/45, 10/40, 5/50, 2/38, 3/23
    hand = [100 * 5 / 355, 100 * 7 / 45, 25.0, 10.0, 100 * 2 / 38, 100 * 3 / 23]
    assert [r.rel_error_pct for r in rep.rows] == pytest.approx(hand, rel=1e-15)
    assert [round(r.rel_error_pct, 2) for r in rep.rows] == [1.41, 15.56, 25.00, 10.00, 5.26, 13.04]
    assert rep.mean_error_pct == pytest.approx(11.71, abs=0.01)
    assert rep.max_error_pct == 25.0


def test_claims_not_reproduced():
    rep = error_report(sample_pairs())
    lo, hi = CLAIMED_TESTING_ERROR_PCT
    assert not lo <= rep.mean_error_pct <= hi
    assert rep.max_error_pct > CLAIMED_FINAL_ERROR_PCT
    assert rep.mean_error_pct > CLAIMED_FINAL_ERROR_PCT


def test_identical_pairs_are_zero():
    rep = error_report([("a", 10, 10), ("b", 3.5, 3.5)])
    assert [r.rel_error_pct for r in rep.rows] == [0.0, 0.0]
    assert rep.mean_error_pct == rep.max_error_pct == 0.0


def test_bad_rows():
    with pytest.raises(InvalidParameterError, match="theoretical"):
        error_report([("a", 0, 1)])
    with pytest.raises(InvalidParameterError):
        error_report([("a", -5, 1)])
    with pytest.raises(InvalidParameterError):
        error_report([])
    with pytest.raises(ConfigError):
        read_pairs("name,theory,measured\nx,1,2\n")
    with pytest.raises(ConfigError, match="line 3"):
        read_pairs("joint,theoretical_deg,measured_deg\nx,1,2\ny,one,2\n")


@given(st.lists(st.tuples(st.text(max_size=3), st.floats(0.1, 360), st.floats(0, 360)),
                min_size=1, max_size=20))
def test_aggregates_recomputable(pairs):
    rep = error_report(pairs)
    errs = [100 * abs(m - t) / t for _, t, m in pairs]
    assert [r.rel_error_pct for r in rep.rows] == errs
    assert rep.max_error_pct == max(errs)
    assert rep.mean_error_pct == pytest.approx(sum(errs) / len(errs))
