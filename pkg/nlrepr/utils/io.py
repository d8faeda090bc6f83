"""io-related utilities"""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

from __future__ import annotations

import codecs
import io
import json
import math
import sys
from typing import Any

import numpy as np
import pandas as pd

#: Schema tag carried by every JSON report.
SCHEMA = "nlrepr/1"

#: printf format for CSV floats.
CSV_FLOAT_FORMAT = "%.17g"


def unicode_std_stream(stream="stdout"):
    """Get a wrapper to write unicode to stdout/stderr as UTF-8.

    This ignores environment variables and default encodings, to reliably write
    unicode to stdout or stderr.
    """
    assert stream in ("stdout", "stderr")
    stream = getattr(sys, stream)

    try:
        stream_b = stream.buffer
    except AttributeError:
        # sys.stdout has been replaced - use it directly
        return stream

    return codecs.getwriter("utf-8")(stream_b)


def jsonable(value: Any) -> Any:
    """Convert numpy scalars/arrays and non-finite floats into plain JSON values.

    Non-finite floats become the strings ``"inf"``, ``"-inf"`` and ``"nan"``.
    """
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if math.isfinite(x):
            return x
        if math.isnan(x):
            return "nan"
        return "inf" if x > 0 else "-inf"
    return value


def dumps_report(report: dict[str, Any]) -> str:
    """Serialize a report deterministically (sorted keys, round-trip floats)."""
    return json.dumps(jsonable(report), sort_keys=True, indent=2, allow_nan=False) + "\n"


def frame_to_csv(frame: pd.DataFrame) -> str:
    """Render a table as CSV text with 17 significant digits."""
    buf = io.StringIO()
    frame.to_csv(buf, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    return buf.getvalue()


def process_frame(tree, values) -> pd.DataFrame:
    """Long table ``node_id,time,parent,value`` for a per-node array."""
    values = np.asarray(values, dtype=float)
    parents = [tree.labels[p] if p >= 0 else "" for p in tree.parent]
    return pd.DataFrame(
        {
            "node_id": list(tree.labels),
            "time": tree.time,
            "parent": parents,
            "value": values,
        }
    )


def read_process_csv(path, tree) -> np.ndarray:
    """Read a per-node process from CSV with ``node_id`` and ``value`` columns."""
    frame = pd.read_csv(path, dtype={"node_id": str})
    if "node_id" not in frame or "value" not in frame:
        msg = f"{path}: expected columns node_id and value"
        raise ValueError(msg)
    return tree.values_from_mapping(dict(zip(frame["node_id"], frame["value"])))
