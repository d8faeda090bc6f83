"""Tests for utils.io"""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

import io as stdlib_io
import json
import sys
from io import StringIO

import numpy as np
import pandas as pd
import pytest

from nlrepr.tree import build_binomial, build_chain
from nlrepr.utils.io import (
    SCHEMA,
    dumps_report,
    frame_to_csv,
    jsonable,
    process_frame,
    read_process_csv,
    unicode_std_stream,
)
from tests.base import chdir


def test_UnicodeStdStream():
    # Test wrapping a bytes-level stdout
    stdoutb = stdlib_io.BytesIO()
    stdout = stdlib_io.TextIOWrapper(stdoutb, encoding="ascii")

    orig_stdout = sys.stdout
    sys.stdout = stdout
    try:
        sample = "η≥ζ∞"
        stream = unicode_std_stream()
        stream.write(sample)

        output = stdoutb.getvalue().decode("utf-8")
        assert output == sample
        assert not stdout.closed
    finally:
        sys.stdout = orig_stdout


def test_UnicodeStdStream_nowrap():
    # If we replace stdout with a StringIO, it shouldn't get wrapped.
    orig_stdout = sys.stdout
    sys.stdout = StringIO()
    try:
        assert unicode_std_stream() is sys.stdout
        assert not sys.stdout.closed
    finally:
        sys.stdout = orig_stdout


def test_jsonable():
    value = {
        1: np.float64(-np.inf),
        "a": np.array([1.0, np.nan]),
        "b": (np.int64(3), np.bool_(True)),
        "c": float("inf"),
    }
    assert jsonable(value) == {"1": "-inf", "a": [1.0, "nan"], "b": [3, True], "c": "inf"}
    assert isinstance(jsonable(np.int32(2)), int)


def test_dumps_report():
    text = dumps_report({"schema": SCHEMA, "value": np.float64(0.1), "eta": [np.inf], "b": 1})
    assert text.endswith("\n")
    data = json.loads(text)
    assert list(data) == ["b", "eta", "schema", "value"]
    assert data["eta"] == ["inf"]
    assert data["value"] == 0.1
    assert text == dumps_report(json.loads(text))


def test_frame_to_csv():
    frame = pd.DataFrame({"a": [0.1, 1 / 3], "b": ["x", "y"]})
    text = frame_to_csv(frame)
    lines = text.split("\n")
    assert lines[0] == "a,b"
    assert lines[1] == "0.10000000000000001,x"
    assert float(lines[2].split(",")[0]) == 1 / 3
    assert "\r" not in text


def test_process_frame():
    tree = build_binomial(1)
    frame = process_frame(tree, [1.0, 2.0, 3.0])
    assert list(frame.columns) == ["node_id", "time", "parent", "value"]
    assert frame["parent"].tolist() == ["", "0", "0"]
    assert frame["time"].tolist() == [0, 1, 1]


def test_read_process_csv(tmp_path):
    tree = build_chain(2)
    with chdir(tmp_path):
        with open("x.csv", "w", encoding="utf-8") as f:
            f.write("node_id,value\n2,3.0\n0,1.0\n1,2.0\n")
        np.testing.assert_array_equal(read_process_csv("x.csv", tree), [1.0, 2.0, 3.0])
        with open("y.csv", "w", encoding="utf-8") as f:
            f.write("node,value\n0,1.0\n")
        with pytest.raises(ValueError):
            read_process_csv("y.csv", tree)
