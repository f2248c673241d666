"""
Line-delimited report records.

Every record is one JSON object per line. Exact values travel as the
strings of format_point so that they read back without loss.
"""

import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Iterable, List, Optional

from ..errors import IoFailure
from ..exact_geometry.moebius import MoebiusMap
from ..exact_geometry.points import INF, IntervalReal, Surd, format_point, parse_point
from ..exact_geometry.tools import CircleInterval
from ..loop_cutting.gaps import Gap

logger = logging.getLogger(__name__)


def to_record_value(value):
    """Convert exact values to their string forms, recursively."""
    if value is INF or isinstance(value, (Fraction, Surd, IntervalReal)):
        return format_point(value)
    if isinstance(value, CircleInterval):
        return [format_point(value.left), format_point(value.right)]
    if isinstance(value, MoebiusMap):
        return str(value)
    if isinstance(value, dict):
        return {key: to_record_value(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_record_value(item) for item in value]
    return value


def gap_record(gap: Gap) -> dict:
    return {
        "p": gap.p.point,
        "q": gap.q.point,
        "g_pq": gap.g_pq.word,
        "g_qp": gap.g_qp.word,
        "a_pq": gap.a_pq,
        "b_pq": gap.b_pq,
        "a_qp": gap.a_qp,
        "b_qp": gap.b_qp,
        "interval_plus": gap.interval_plus,
        "interval_minus": gap.interval_minus,
        "interval": gap.interval_full,
    }


def dumps(record: dict) -> str:
    return json.dumps(to_record_value(record), sort_keys=False)


def write_records(records: Iterable[dict], path: Optional[str] = None) -> int:
    """Write records to path, or to stdout when path is None. Returns the count written."""
    count = 0
    try:
        handle = open(path, "w") if path else sys.stdout
        try:
            for record in records:
                handle.write(dumps(record) + "\n")
                count += 1
        finally:
            if path:
                handle.close()
    except OSError as e:
        raise IoFailure(f"cannot write records to {path}: {e}") from e
    return count


def read_records(path, exact_fields: Iterable[str] = ()) -> List[dict]:
    """Read records back, parsing the named fields to exact points."""
    exact_fields = set(exact_fields)
    try:
        with open(Path(path), "r") as f:
            records = [json.loads(line) for line in f if line.strip()]
    except (OSError, json.JSONDecodeError) as e:
        raise IoFailure(f"cannot read records from {path}: {e}") from e
    for record in records:
        for key in exact_fields & set(record):
            value = record[key]
            record[key] = [parse_point(item) for item in value] if isinstance(value, list) else parse_point(value)
    return records
