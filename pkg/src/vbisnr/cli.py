"""Command-line frontend.

Subcommands: synth, measure, scan, psnr, spectrum, plan-validate. Machine
output goes to stdout (or --out); diagnostics go to stderr. Exit codes:
0 success, 1 invalid input, 2 I/O failure, 3 measurement impossible.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .capture import extract_vbi_lines, read_capture, write_capture
from .dsp import FilterSpec, line_spectrum
from .errors import (
    CaptureFormatError,
    InvalidInputError,
    MeasurementImpossibleError,
)
from .measure import LineRecord, MeasureConfig, accumulate, psnr
from .scan import parse_plan, render_report, scan
from .synth import SynthConfig, synthesize

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2
EXIT_NO_MEASUREMENT = 3

MAX_FRAMES = 30


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors; the exit-code contract
    # reserves 2 for I/O, so route usage problems through InvalidInputError.
    def error(self, message):
        raise InvalidInputError(message)


def _parse_interferer(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) not in (2, 3):
        raise InvalidInputError(
            f"--interferer expects frequency,amplitude[,phase], got {text!r}"
        )
    try:
        freq = float(parts[0])
        amp = float(parts[1])
        phase = float(parts[2]) if len(parts) == 3 else 0.0
    except ValueError as exc:
        raise InvalidInputError(f"bad --interferer value {text!r}") from exc
    return (freq, amp, phase)


def _write_text(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vbisnr", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic capture file")
    p.add_argument("--sigma", type=float, default=0.0, help="Gaussian noise RMS in code units")
    p.add_argument("--black-level", type=float, default=60.0)
    p.add_argument(
        "--interferer",
        action="append",
        default=[],
        metavar="FREQ,AMP[,PHASE]",
        help="add a sinusoidal interferer (repeatable)",
    )
    p.add_argument("--frames", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--vbi-lines", type=int, default=2, help="VBI lines per frame")
    p.add_argument("--samples-per-line", type=int, default=864)
    p.add_argument("--sample-rate", type=float, default=13.5e6)
    p.add_argument("--bit-depth", type=int, default=8)
    p.add_argument("--sync", action="store_true", help="include a sync/burst region")
    p.add_argument("--label", default="", help="channel label for the header")
    p.add_argument("--out", required=True)

    p = sub.add_parser("measure", help="measure SNR of a capture")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--frames", type=int, default=MAX_FRAMES,
                   help=f"frames to accumulate (max {MAX_FRAMES})")
    p.add_argument("--filter", choices=("on", "off"), default="off")
    p.add_argument("--cutoff-hz", type=float, default=2.0e6)
    p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("scan", help="scan a channel plan against capture files")
    p.add_argument("--plan", required=True)
    p.add_argument("--captures-dir", required=True)
    p.add_argument("--filter-cutoff", type=float, default=2.0e6)
    p.add_argument("--format", choices=("csv", "json", "table"), default="table")
    p.add_argument("--out")

    p = sub.add_parser("psnr", help="PSNR between two raw pixel planes")
    p.add_argument("--original", required=True)
    p.add_argument("--decoded", required=True)
    p.add_argument("--bits", type=int, default=8)
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--per-channel", action="store_true")

    p = sub.add_parser("spectrum", help="export a line's magnitude spectrum as CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--frame", type=int, default=0)
    p.add_argument("--line", type=int, help="line index within the frame")
    p.add_argument("--fft-size", type=int)
    p.add_argument("--out")

    p = sub.add_parser("plan-validate", help="check a channel-plan CSV")
    p.add_argument("--plan", required=True)

    return parser


def _cmd_synth(args) -> int:
    config = SynthConfig(
        black_level=args.black_level,
        noise_sigma=args.sigma,
        interferers=tuple(_parse_interferer(s) for s in args.interferer),
        seed=args.seed,
        samples_per_line=args.samples_per_line,
        sample_rate_hz=args.sample_rate,
        bit_depth=args.bit_depth,
        frames=args.frames,
        lines_per_frame=args.vbi_lines,
        sync=args.sync,
        channel_label=args.label,
    )
    capture = synthesize(config)
    write_capture(capture, args.out)
    print(f"wrote {args.out}: clip_count={capture.header.extra['clip_count']}",
          file=sys.stderr)
    return EXIT_OK


def _cmd_measure(args) -> int:
    if args.frames > MAX_FRAMES:
        raise InvalidInputError(f"--frames may not exceed the {MAX_FRAMES}-frame limit")
    if args.frames < 1:
        raise InvalidInputError("--frames must be positive")
    filt = FilterSpec(cutoff_hz=args.cutoff_hz) if args.filter == "on" else None
    config = MeasureConfig(filter=filt)
    capture = read_capture(args.infile)
    lines = extract_vbi_lines(capture, frame_range=args.frames)
    result = accumulate(lines, config)
    if args.json:
        print(json.dumps(result.as_dict(), indent=2))
    else:
        print(f"v_ref {result.v_ref:.4f}")
        print(f"v_n {result.v_n:.4f}")
        print(f"snr_db {result.snr_db:.1f}")
        print(f"error_margin {result.error_margin:.6f}")
        print(f"n_samples {result.n_samples}")
        print(f"frames_used {result.frames_used}")
        print(f"filtered {'on' if result.filtered else 'off'}")
        if result.saturated:
            print("saturated true")
    return EXIT_OK


def _cmd_scan(args) -> int:
    plan = parse_plan(Path(args.plan).read_text())
    captures = {}
    directory = Path(args.captures_dir)
    if not directory.is_dir():
        raise FileNotFoundError(f"captures directory not found: {directory}")
    for entry in plan.entries:
        path = directory / f"{entry.designation}.vbi"
        if not path.exists():
            continue
        try:
            captures[entry.designation] = read_capture(path)
        except (CaptureFormatError, OSError) as exc:
            print(f"warning: skipping {path}: {exc}", file=sys.stderr)
    config = MeasureConfig(filter=FilterSpec(cutoff_hz=args.filter_cutoff))
    report = scan(plan, captures, config)
    _write_text(render_report(report, args.format), args.out)
    return EXIT_OK


def _load_plane(path: str, bits: int, width: int | None, height: int | None) -> np.ndarray:
    if width is None or height is None:
        sidecar = Path(path + ".hdr")
        if not sidecar.exists():
            raise InvalidInputError(
                f"{path}: supply --width/--height or a {sidecar.name} sidecar"
            )
        fields = {}
        for line in sidecar.read_text().splitlines():
            if line.strip():
                key, _, value = line.partition("=")
                fields[key.strip()] = value.strip()
        try:
            width = int(fields["width"])
            height = int(fields["height"])
        except (KeyError, ValueError) as exc:
            raise InvalidInputError(f"{sidecar}: bad sidecar header: {exc}") from exc

    dtype = np.uint8 if bits <= 8 else np.dtype("<u2")
    data = np.fromfile(path, dtype=dtype)
    plane_px = width * height
    if data.size == plane_px:
        return data.reshape(height, width)
    if data.size == 3 * plane_px:
        # Planar file: three consecutive planes.
        return np.moveaxis(data.reshape(3, height, width), 0, -1)
    raise InvalidInputError(
        f"{path}: {data.size} samples match neither {width}x{height} "
        f"nor 3 planes of it"
    )


def _cmd_psnr(args) -> int:
    original = _load_plane(args.original, args.bits, args.width, args.height)
    decoded = _load_plane(args.decoded, args.bits, args.width, args.height)
    result = psnr(original, decoded, bits_per_pixel=args.bits)
    print(f"mse {result.mse:.6f}")
    print(f"psnr_db {result.psnr_db:.1f}")
    if result.saturated:
        print("saturated true")
    if args.per_channel and result.per_channel is not None:
        for label, value in result.per_channel:
            print(f"{label} {value:.1f}")
    return EXIT_OK


def _cmd_spectrum(args) -> int:
    capture = read_capture(args.infile)
    header = capture.header
    if not 0 <= args.frame < header.frames:
        raise InvalidInputError(
            f"frame {args.frame} outside capture of {header.frames} frames"
        )
    if args.line is None:
        if not header.vbi_line_indices:
            raise InvalidInputError("capture lists no VBI lines; pass --line")
        line_idx = header.vbi_line_indices[0]
    else:
        line_idx = args.line
    if not 0 <= line_idx < header.lines_per_frame:
        raise InvalidInputError(
            f"line {line_idx} outside frame of {header.lines_per_frame} lines"
        )

    record = LineRecord(
        samples=capture.samples[args.frame, line_idx],
        bit_depth=header.bit_depth,
        sample_rate_hz=header.sample_rate_hz,
        line_index=line_idx,
        frame_index=args.frame,
    )
    spectrum = line_spectrum(record, args.fft_size)
    rows = ["frequency_hz,magnitude_db"]
    for k, db in enumerate(spectrum.magnitudes_db):
        rows.append(f"{k * spectrum.bin_hz!r},{float(db)!r}")
    _write_text("\n".join(rows) + "\n", args.out)
    return EXIT_OK


def _cmd_plan_validate(args) -> int:
    plan = parse_plan(Path(args.plan).read_text())
    print(f"plan ok: {len(plan)} channels")
    return EXIT_OK


_COMMANDS = {
    "synth": _cmd_synth,
    "measure": _cmd_measure,
    "scan": _cmd_scan,
    "psnr": _cmd_psnr,
    "spectrum": _cmd_spectrum,
    "plan-validate": _cmd_plan_validate,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (CaptureFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except MeasurementImpossibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_MEASUREMENT


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
