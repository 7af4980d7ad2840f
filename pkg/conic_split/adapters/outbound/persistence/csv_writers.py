"""
CSV writers for iteration traces and benchmark summaries.
"""
import csv
import json
import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, Mapping, TextIO

from conic_split.domain.entities import TraceRecord
from conic_split.domain.errors import PersistenceError
from conic_split.domain.ports import ISummaryWriter, ITraceWriter

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ("iter", "primal_res", "dual_res", "gap", "wall_ms", "conditioning_event")

SUMMARY_COLUMNS = (
    "cell", "family", "n", "seed", "config", "algorithm", "precondition", "condition",
    "status", "iterations", "wall_ms", "primal_res", "dual_res", "gap", "combined", "failed",
)


def format_value(value: Any) -> str:
    """Round-trippable text for floats, 1/0 for flags, empty for None."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def meta_path(trace_path: Path) -> Path:
    """Sidecar location: <trace>.meta.json."""
    trace_path = Path(trace_path)
    return trace_path.with_name(trace_path.name + ".meta.json")


@contextmanager
def _open_for_write(path: Path) -> Iterator[TextIO]:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as handle:
            yield handle
    except OSError as e:
        raise PersistenceError(f"{path}: {e}") from e


class CsvTraceWriter(ITraceWriter):
    """
    Writes TraceRecords in column order plus a JSON metadata sidecar.

    Records without a wall time leave the wall_ms column empty.
    """

    def write(self, records: Iterable[TraceRecord], path: Path,
              metadata: Mapping[str, Any]) -> Path:
        path = Path(path)
        count = 0
        with _open_for_write(path) as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(TRACE_COLUMNS)
            for record in records:
                writer.writerow([
                    format_value(record.iter),
                    format_value(record.primal_res),
                    format_value(record.dual_res),
                    format_value(record.gap),
                    format_value(record.wall_ms),
                    format_value(record.conditioning_event),
                ])
                count += 1

        with _open_for_write(meta_path(path)) as handle:
            handle.write(json.dumps(dict(metadata), indent=2, sort_keys=True) + "\n")
        logger.debug("Trace written", extra={"path": str(path), "records": count})
        return path


class CsvSummaryWriter(ISummaryWriter):
    """One row per (cell, config) in SUMMARY_COLUMNS order."""

    def write(self, rows: Iterable[Dict[str, Any]], path: Path) -> Path:
        path = Path(path)
        with _open_for_write(path) as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(SUMMARY_COLUMNS)
            for row in rows:
                writer.writerow([format_value(row.get(column)) for column in SUMMARY_COLUMNS])
        return path
