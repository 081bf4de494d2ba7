"""Channel plans and paired unfiltered/filtered scan reports.

A plan maps channel designations to video carrier frequencies; a scan
measures every channel that has capture data and reports the unfiltered
(snr1) and low-pass-filtered (snr2) SNR side by side, both derived from
the same capture so RF conditions cannot drift between the two readings.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from typing import Mapping

from .capture import CaptureFile, extract_vbi_lines
from .dsp import FilterSpec
from .errors import (
    CaptureFormatError,
    InvalidInputError,
    MeasurementImpossibleError,
)
from .measure import MeasureConfig, Measurement, accumulate, error_margin_db

STATUS_MEASURED = "measured"
STATUS_NO_CAPTURE = "no-capture"
STATUS_SKIPPED = "unsynchronized-skipped"

_CSV_COLUMNS = (
    "designation",
    "name",
    "freq_mhz",
    "snr1_db",
    "snr2_db",
    "error1_db",
    "error2_db",
    "n_samples",
    "status",
)


@dataclass(frozen=True)
class ChannelEntry:
    designation: str
    name: str
    video_carrier_mhz: float

    def __post_init__(self) -> None:
        if not self.designation:
            raise InvalidInputError("channel designation may not be empty")
        if not 40.0 < self.video_carrier_mhz < 1000.0:
            raise InvalidInputError(
                f"channel {self.designation}: carrier {self.video_carrier_mhz} MHz "
                "outside the supported (40, 1000) MHz range"
            )


@dataclass(frozen=True)
class ChannelPlan:
    entries: tuple[ChannelEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, designation: str) -> ChannelEntry | None:
        for entry in self.entries:
            if entry.designation == designation:
                return entry
        return None


@dataclass(frozen=True)
class ScanRow:
    channel: ChannelEntry
    snr1: Measurement | None
    snr2: Measurement | None
    status: str


@dataclass(frozen=True)
class ScanReport:
    rows: tuple[ScanRow, ...]
    config: MeasureConfig
    timestamp: str


def parse_plan(text: str) -> ChannelPlan:
    """Parse channel-plan CSV with header designation,name,video_carrier_mhz."""
    reader = csv.reader(io.StringIO(text))
    rows = [(i + 1, row) for i, row in enumerate(reader) if row]
    if not rows:
        raise InvalidInputError("empty channel plan")
    header = [cell.strip().lower() for cell in rows[0][1]]
    if header != ["designation", "name", "video_carrier_mhz"]:
        raise InvalidInputError(
            "channel plan must start with header designation,name,video_carrier_mhz"
        )

    entries: list[ChannelEntry] = []
    seen: set[str] = set()
    for lineno, row in rows[1:]:
        if len(row) != 3:
            raise InvalidInputError(f"plan line {lineno}: expected 3 fields, got {len(row)}")
        designation, name, freq_text = (cell.strip() for cell in row)
        try:
            freq = float(freq_text)
        except ValueError as exc:
            raise InvalidInputError(
                f"plan line {lineno}: bad frequency {freq_text!r}"
            ) from exc
        if designation in seen:
            raise InvalidInputError(f"duplicate channel designation {designation!r}")
        seen.add(designation)
        try:
            entries.append(ChannelEntry(designation, name, freq))
        except InvalidInputError as exc:
            raise InvalidInputError(f"plan line {lineno}: {exc}") from exc
    return ChannelPlan(entries=tuple(entries))


def scan(
    plan: ChannelPlan,
    source: Mapping[str, CaptureFile],
    config: MeasureConfig | None = None,
    *,
    timestamp: str | None = None,
) -> ScanReport:
    """Measure every channel of ``plan`` that has a capture in ``source``.

    Each captured channel gets snr1 (unfiltered) and snr2 (filtered with
    ``config.filter``, defaulting to the 2 MHz low-pass) from the same
    pooled VBI samples. Channels without captures become no-capture rows;
    captures that cannot be measured are skipped with their own status.
    A per-channel problem never aborts the scan.
    """
    if len(plan) == 0:
        raise InvalidInputError("cannot scan an empty channel plan")
    if config is None:
        config = MeasureConfig()
    filt = config.filter if config.filter is not None else FilterSpec()
    effective = replace(config, filter=filt)

    rows: list[ScanRow] = []
    ordered = sorted(plan.entries, key=lambda e: (e.video_carrier_mhz, e.designation))
    for entry in ordered:
        capture = source.get(entry.designation)
        if capture is None:
            rows.append(ScanRow(entry, None, None, STATUS_NO_CAPTURE))
            continue
        try:
            lines = extract_vbi_lines(capture, frame_range=config.max_frames)
            snr1 = accumulate(lines, replace(effective, filter=None))
            snr2 = accumulate(lines, effective)
        except (InvalidInputError, MeasurementImpossibleError, CaptureFormatError):
            rows.append(ScanRow(entry, None, None, STATUS_SKIPPED))
            continue
        rows.append(ScanRow(entry, snr1, snr2, STATUS_MEASURED))

    if timestamp is None:
        timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return ScanReport(rows=tuple(rows), config=effective, timestamp=timestamp)


def _row_csv_fields(row: ScanRow) -> list[str]:
    def db_error(m: Measurement | None) -> str:
        return "" if m is None else repr(error_margin_db(m.n_samples))

    snr1 = "" if row.snr1 is None else repr(row.snr1.snr_db)
    snr2 = "" if row.snr2 is None else repr(row.snr2.snr_db)
    if row.snr1 is not None:
        n = str(row.snr1.n_samples)
    elif row.snr2 is not None:
        n = str(row.snr2.n_samples)
    else:
        n = ""
    return [
        row.channel.designation,
        row.channel.name,
        repr(row.channel.video_carrier_mhz),
        snr1,
        snr2,
        db_error(row.snr1),
        db_error(row.snr2),
        n,
        row.status,
    ]


def render_report(report: ScanReport, format: str = "table") -> str:
    """Render a report as ``csv``, ``json``, or human-readable ``table``.

    CSV and JSON carry full precision; the table rounds dB values to one
    decimal.
    """
    if format == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(_CSV_COLUMNS)
        for row in report.rows:
            writer.writerow(_row_csv_fields(row))
        return out.getvalue()

    if format == "json":
        payload = {
            "timestamp": report.timestamp,
            "config": report.config.as_dict(),
            "channels": [
                {
                    "designation": row.channel.designation,
                    "name": row.channel.name,
                    "video_carrier_mhz": row.channel.video_carrier_mhz,
                    "status": row.status,
                    "snr1": None if row.snr1 is None else row.snr1.as_dict(),
                    "snr2": None if row.snr2 is None else row.snr2.as_dict(),
                }
                for row in report.rows
            ],
        }
        return json.dumps(payload, indent=2) + "\n"

    if format == "table":
        lines = [f"{'channel':<10}{'snr1_db':>8}{'snr2_db':>8}  status"]
        for row in report.rows:
            snr1 = "-" if row.snr1 is None else f"{row.snr1.snr_db:.1f}"
            snr2 = "-" if row.snr2 is None else f"{row.snr2.snr_db:.1f}"
            lines.append(f"{row.channel.designation:<10}{snr1:>8}{snr2:>8}  {row.status}")
        return "\n".join(lines) + "\n"

    raise InvalidInputError(f"unknown report format {format!r}")


def report_from_json(text: str) -> ScanReport:
    """Inverse of ``render_report(..., 'json')``."""
    try:
        payload = json.loads(text)
        rows = tuple(
            ScanRow(
                channel=ChannelEntry(
                    designation=ch["designation"],
                    name=ch["name"],
                    video_carrier_mhz=float(ch["video_carrier_mhz"]),
                ),
                snr1=None if ch["snr1"] is None else Measurement.from_dict(ch["snr1"]),
                snr2=None if ch["snr2"] is None else Measurement.from_dict(ch["snr2"]),
                status=ch["status"],
            )
            for ch in payload["channels"]
        )
        return ScanReport(
            rows=rows,
            config=MeasureConfig.from_dict(payload["config"]),
            timestamp=payload["timestamp"],
        )
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise InvalidInputError(f"not a valid scan report: {exc}") from exc
