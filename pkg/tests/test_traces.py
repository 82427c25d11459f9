import numpy as np
import pytest

from gmsa.traces import (
    TraceParseError,
    TraceRangeError,
    TraceSeries,
    TraceShapeError,
    TraceSlotError,
    format_trace,
    load_trace,
    write_trace,
)

from conftest import make_config

CFG = make_config(np.eye(2))


def write(tmp_path, text, name="t.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_load_small_pue_trace(tmp_path):
    p = write(tmp_path, "slot,dc0,dc1\n0,1.1,1.4\n1,1.2,1.3\n2,1.0,1.5\n")
    s = load_trace(p, "pue", CFG)
    assert s.values.shape == (3, 2)
    assert s.values[2, 1] == 1.5
    assert s.dc_ids == ("dc0", "dc1")


def test_roundtrip_is_byte_identical(tmp_path):
    text = "slot,dc0,dc1\n0,1.1,1.4\n1,1.2000000000000002,1.3\n2,1.0,1.5\n"
    p = write(tmp_path, text)
    out = write_trace(load_trace(p, "pue", CFG), tmp_path / "out.csv")
    assert out.read_bytes() == text.encode()


def test_roundtrip_ignores_trailing_whitespace(tmp_path):
    text = "slot,dc0,dc1  \n0,0.05,0.08\t\n1,0.0,0.1\n\n\n"
    s = load_trace(write(tmp_path, text), "price_weight", CFG)
    assert format_trace(s) == "slot,dc0,dc1\n0,0.05,0.08\n1,0.0,0.1\n"


def test_generated_series_roundtrip(tmp_path, rng):
    vals = 1 + rng.random((50, 2))
    series = TraceSeries("pue", vals, CFG.dc_ids)
    p = write_trace(series, tmp_path / "g.csv")
    back = load_trace(p, "pue", CFG)
    assert np.array_equal(back.values, vals)
    assert format_trace(back) == p.read_text()


def test_pue_below_one_names_location(tmp_path):
    p = write(tmp_path, "slot,dc0,dc1\n0,1.1,1.2\n1,0.8,1.2\n")
    with pytest.raises(TraceRangeError) as err:
        load_trace(p, "pue", CFG)
    assert (err.value.row, err.value.column, err.value.line) == (1, 0, 3)
    assert "dc0" in str(err.value)


def test_negative_price(tmp_path):
    p = write(tmp_path, "slot,dc0,dc1\n0,0.1,-0.2\n")
    with pytest.raises(TraceRangeError):
        load_trace(p, "price_weight", CFG)


def test_extra_column_is_shape_error(tmp_path):
    with pytest.raises(TraceShapeError):
        load_trace(write(tmp_path, "slot,dc0,dc1,dc2\n0,1,1,1\n"), "pue", CFG)
    with pytest.raises(TraceShapeError) as err:
        load_trace(write(tmp_path, "slot,dc0,dc1\n0,1.1,1.1,1.3\n"), "pue", CFG)
    assert err.value.line == 2


def test_wrong_labels_are_shape_error(tmp_path):
    with pytest.raises(TraceShapeError):
        load_trace(write(tmp_path, "slot,east,west\n0,1,1\n"), "pue", CFG)


def test_slot_gap(tmp_path):
    with pytest.raises(TraceSlotError) as err:
        load_trace(write(tmp_path, "slot,dc0,dc1\n0,1,1\n2,1,1\n"), "pue", CFG)
    assert err.value.line == 3
    with pytest.raises(TraceSlotError):
        load_trace(write(tmp_path, "slot,dc0,dc1\n1,1,1\n"), "pue", CFG)


@pytest.mark.parametrize("text", [
    "",
    "time,dc0,dc1\n0,1,1\n",
    "slot,dc0,dc1\n",
    "slot,dc0,dc1\nzero,1,1\n",
    "slot,dc0,dc1\n0,1,abc\n",
    "slot,dc0,dc1\n0,1,nan\n",
    "slot,dc0,dc1\n0,1,1\n\n1,1,1\n",
])
def test_parse_errors(tmp_path, text):
    with pytest.raises(TraceParseError):
        load_trace(write(tmp_path, text), "pue", CFG)


def test_error_classes_are_value_errors():
    assert issubclass(TraceRangeError, ValueError)


def test_cyclic_extension():
    s = TraceSeries("price_weight", [[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]], ("a", "b"))
    assert np.array_equal(s.at(4), [3.0, 4.0])
    assert np.array_equal(s.at(3), s.at(0))


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_trace(tmp_path / "none.csv", "pue", CFG)
