"""Capture file container and VBI line extraction.

A capture is a self-describing binary file: the magic bytes ``VBI1``, a
4-byte little-endian header length, a UTF-8 ``key=value`` header block,
then the raw sample payload, line-major within frame-major order. Samples
occupy one byte up to 8-bit depth and two little-endian, LSB-aligned bytes
above that. Write then read is bit-identical on every valid file.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import CaptureFormatError, InvalidInputError, MeasurementImpossibleError
from .measure import LineRecord, default_window

MAGIC = b"VBI1"
FORMAT_VERSION = 1

_HEADER_KEYS = (
    "format_version",
    "bit_depth",
    "sample_rate_hz",
    "samples_per_line",
    "lines_per_frame",
    "frames",
    "vbi_line_indices",
    "channel_label",
)


@dataclass(frozen=True)
class CaptureHeader:
    """Metadata block of a capture file.

    ``vbi_line_indices`` names the blanked lines suitable for measurement;
    it may be empty, in which case the capture cannot be measured.
    ``extra`` holds free-form key=value pairs (the generator records its
    parameters and clip count there).
    """

    samples_per_line: int
    lines_per_frame: int
    frames: int
    vbi_line_indices: tuple[int, ...] = ()
    bit_depth: int = 8
    sample_rate_hz: float = 13.5e6
    channel_label: str = ""
    format_version: int = FORMAT_VERSION
    extra: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.format_version != FORMAT_VERSION:
            raise InvalidInputError(f"unsupported format_version {self.format_version}")
        if not 8 <= self.bit_depth <= 10:
            raise InvalidInputError(f"bit_depth must be 8..10, got {self.bit_depth}")
        if self.samples_per_line < 16:
            raise InvalidInputError("samples_per_line must be at least 16")
        if self.lines_per_frame < 1 or self.frames < 1:
            raise InvalidInputError("lines_per_frame and frames must be positive")
        if self.sample_rate_hz <= 0:
            raise InvalidInputError("sample_rate_hz must be positive")
        if "\n" in self.channel_label:
            raise InvalidInputError("channel_label may not contain newlines")
        idx = tuple(int(i) for i in self.vbi_line_indices)
        if len(set(idx)) != len(idx):
            raise InvalidInputError("vbi_line_indices contains duplicates")
        if any(i < 0 or i >= self.lines_per_frame for i in idx):
            raise InvalidInputError(
                f"vbi_line_indices must lie in [0, {self.lines_per_frame})"
            )
        object.__setattr__(self, "vbi_line_indices", idx)

    @property
    def bytes_per_sample(self) -> int:
        return 1 if self.bit_depth <= 8 else 2

    @property
    def sample_dtype(self) -> np.dtype:
        return np.dtype(np.uint8) if self.bytes_per_sample == 1 else np.dtype("<u2")

    @property
    def payload_bytes(self) -> int:
        return (
            self.frames
            * self.lines_per_frame
            * self.samples_per_line
            * self.bytes_per_sample
        )


@dataclass(eq=False)
class CaptureFile:
    """Parsed capture: header plus samples shaped (frames, lines, samples)."""

    header: CaptureHeader
    samples: np.ndarray

    def __post_init__(self) -> None:
        h = self.header
        arr = np.asarray(self.samples)
        expected = (h.frames, h.lines_per_frame, h.samples_per_line)
        if arr.shape != expected:
            raise InvalidInputError(
                f"payload shape {arr.shape} does not match header {expected}"
            )
        if not np.issubdtype(arr.dtype, np.integer):
            raise InvalidInputError("samples must be integers")
        arr = arr.astype(np.int32, copy=True)
        if arr.size and (arr.min() < 0 or arr.max() >= (1 << h.bit_depth)):
            raise InvalidInputError(
                f"sample values exceed the {h.bit_depth}-bit code range"
            )
        arr.flags.writeable = False
        self.samples = arr


def _serialize_header(header: CaptureHeader) -> bytes:
    values = {
        "format_version": str(header.format_version),
        "bit_depth": str(header.bit_depth),
        "sample_rate_hz": repr(float(header.sample_rate_hz)),
        "samples_per_line": str(header.samples_per_line),
        "lines_per_frame": str(header.lines_per_frame),
        "frames": str(header.frames),
        "vbi_line_indices": ",".join(str(i) for i in header.vbi_line_indices),
        "channel_label": header.channel_label,
    }
    lines = [f"{k}={values[k]}" for k in _HEADER_KEYS]
    for key in sorted(header.extra):
        if key in _HEADER_KEYS:
            raise InvalidInputError(f"extra metadata key {key!r} shadows a header field")
        value = header.extra[key]
        if "\n" in key or "\n" in value or "=" in key:
            raise InvalidInputError(f"extra metadata entry {key!r} is not encodable")
        lines.append(f"{key}={value}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def write_capture(capture: CaptureFile, path) -> None:
    """Write a capture to ``path`` in the VBI1 container format."""
    header_bytes = _serialize_header(capture.header)
    payload = capture.samples.astype(capture.header.sample_dtype).tobytes(order="C")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(header_bytes)))
        fh.write(header_bytes)
        fh.write(payload)


def read_capture(path) -> CaptureFile:
    """Parse a VBI1 capture file, validating header/payload consistency."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 8 or blob[:4] != MAGIC:
        raise CaptureFormatError(f"{path}: not a VBI1 capture file")
    (header_len,) = struct.unpack("<I", blob[4:8])
    if len(blob) < 8 + header_len:
        raise CaptureFormatError(f"{path}: header truncated")
    try:
        text = blob[8 : 8 + header_len].decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CaptureFormatError(f"{path}: header is not valid UTF-8") from exc

    fields: dict[str, str] = {}
    # the separator is strictly \n; values may hold any other character
    for raw in text.split("\n"):
        if not raw:
            continue
        if "=" not in raw:
            raise CaptureFormatError(f"{path}: malformed header line {raw!r}")
        key, _, value = raw.partition("=")
        fields[key] = value

    def require(key: str) -> str:
        if key not in fields:
            raise CaptureFormatError(f"{path}: missing header field {key!r}")
        return fields.pop(key)

    try:
        version = int(require("format_version"))
        if version != FORMAT_VERSION:
            raise CaptureFormatError(f"{path}: unknown format_version {version}")
        vbi_text = require("vbi_line_indices")
        header = CaptureHeader(
            bit_depth=int(require("bit_depth")),
            sample_rate_hz=float(require("sample_rate_hz")),
            samples_per_line=int(require("samples_per_line")),
            lines_per_frame=int(require("lines_per_frame")),
            frames=int(require("frames")),
            vbi_line_indices=tuple(int(v) for v in vbi_text.split(",") if v != ""),
            channel_label=fields.pop("channel_label", ""),
            format_version=version,
            extra=dict(fields),
        )
    except (ValueError, InvalidInputError) as exc:
        if isinstance(exc, CaptureFormatError):
            raise
        raise CaptureFormatError(f"{path}: bad header: {exc}") from exc

    payload = blob[8 + header_len :]
    if len(payload) != header.payload_bytes:
        raise CaptureFormatError(
            f"{path}: payload size mismatch: expected {header.payload_bytes} bytes, "
            f"found {len(payload)}"
        )
    samples = np.frombuffer(payload, dtype=header.sample_dtype).reshape(
        header.frames, header.lines_per_frame, header.samples_per_line
    )
    if header.bit_depth > 8 and samples.max(initial=0) >= (1 << header.bit_depth):
        raise CaptureFormatError(
            f"{path}: sample values exceed the {header.bit_depth}-bit code range"
        )
    return CaptureFile(header=header, samples=samples.astype(np.int32))


def extract_vbi_lines(
    capture: CaptureFile,
    frame_range=None,
    window_override: tuple[int, int] | None = None,
) -> list[LineRecord]:
    """LineRecords for every (frame, VBI line) pair of the capture.

    ``frame_range`` may be ``None`` (all frames), an integer n (the first
    n frames, capped at what the capture holds), or a half-open
    ``(start, stop)`` tuple, which must lie within the capture. Frame order
    is preserved. Without ``window_override`` each record gets the default
    measurement window for the line length.
    """
    header = capture.header
    if frame_range is None:
        frames = range(header.frames)
    elif isinstance(frame_range, int):
        if frame_range < 1:
            raise InvalidInputError(f"frame count must be positive, got {frame_range}")
        frames = range(min(frame_range, header.frames))
    else:
        start, stop = int(frame_range[0]), int(frame_range[1])
        if not (0 <= start < stop <= header.frames):
            raise InvalidInputError(
                f"frame range [{start}, {stop}) outside capture of {header.frames} frames"
            )
        frames = range(start, stop)

    if not header.vbi_line_indices:
        raise MeasurementImpossibleError(
            "capture designates no VBI lines; record clean blanked lines "
            "(no teletext or test inserts) and list them in vbi_line_indices"
        )

    window = window_override if window_override is not None else default_window(
        header.samples_per_line
    )
    records = []
    for f in frames:
        for idx in header.vbi_line_indices:
            records.append(
                LineRecord(
                    samples=capture.samples[f, idx],
                    bit_depth=header.bit_depth,
                    sample_rate_hz=header.sample_rate_hz,
                    line_index=idx,
                    frame_index=f,
                    window=window,
                )
            )
    return records
