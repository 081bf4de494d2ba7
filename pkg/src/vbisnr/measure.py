"""Statistical SNR measurement on blanked video lines.

A blanked (empty black) vertical-blanking-interval line carries a constant
level, so its sample mean estimates the reference level and the spread of
the samples around that mean is pure noise. The functions here implement
that separation: reference level, noise RMS over an N-1 denominator,
SNR in dB against the nominal full-scale video amplitude, the statistical
error margin of the estimate, multi-frame accumulation, and PSNR between
pixel planes.

Sums are computed with ``math.fsum`` so results are exact to the final
rounding and therefore independent of sample order; pooling frames in any
order yields bit-identical measurements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import dsp
from .errors import InvalidInputError, MeasurementImpossibleError

# Nominal 8-bit video signal amplitude: 235 - 16 code units (ITU-R BT.601
# levels). Wider samples scale proportionally.
FULL_SCALE_8BIT = 219.0

_LN10 = math.log(10.0)


def default_window(n_samples: int) -> tuple[int, int]:
    """Measurement window for an ``n_samples``-long line.

    Excludes the first 12% (sync, burst, back porch at nominal timing) and
    the last 2% (front porch) of the line. Integer arithmetic, so exact.
    """
    start = (12 * n_samples + 99) // 100
    end = n_samples - (2 * n_samples) // 100
    return (start, end)


@dataclass(frozen=True)
class LineRecord:
    """One digitized video line plus the region to measure.

    ``window`` is a half-open ``(start, end)`` sample range; it defaults to
    :func:`default_window` of the line length. Samples are ADC codes.
    """

    samples: np.ndarray
    bit_depth: int = 8
    sample_rate_hz: float = 13.5e6
    line_index: int = 0
    frame_index: int = 0
    window: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        arr = np.asarray(self.samples)
        if arr.ndim != 1:
            raise InvalidInputError("samples must be one-dimensional")
        if not np.issubdtype(arr.dtype, np.integer):
            raise InvalidInputError("samples must be integer ADC codes")
        if not 8 <= self.bit_depth <= 10:
            raise InvalidInputError(f"bit_depth must be 8..10, got {self.bit_depth}")
        if self.sample_rate_hz <= 0:
            raise InvalidInputError("sample_rate_hz must be positive")
        if self.line_index < 0 or self.frame_index < 0:
            raise InvalidInputError("line_index and frame_index must be non-negative")
        arr = arr.astype(np.int32, copy=True)
        if arr.size and (arr.min() < 0 or arr.max() >= (1 << self.bit_depth)):
            raise InvalidInputError(
                f"line {self.line_index} frame {self.frame_index}: sample values "
                f"must lie in [0, {(1 << self.bit_depth) - 1}]"
            )
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)

        window = self.window if self.window is not None else default_window(arr.size)
        start, end = int(window[0]), int(window[1])
        if not (0 <= start < end <= arr.size):
            raise InvalidInputError(
                f"line {self.line_index} frame {self.frame_index}: window "
                f"[{start}, {end}) does not fit a {arr.size}-sample line"
            )
        if end - start < 2:
            raise InvalidInputError(
                f"line {self.line_index} frame {self.frame_index}: window "
                f"[{start}, {end}) is shorter than 2 samples"
            )
        object.__setattr__(self, "window", (start, end))

    def window_samples(self) -> np.ndarray:
        start, end = self.window
        return self.samples[start:end]


@dataclass(frozen=True)
class MeasureConfig:
    """Measurement parameters.

    ``full_scale`` of ``None`` means the nominal video range for the line's
    bit depth: 219 code units at 8 bits, doubling per extra bit. When the
    noise RMS is exactly zero the SNR is reported as ``snr_cap_db`` with
    the measurement flagged saturated.
    """

    full_scale: float | None = None
    max_frames: int = 30
    snr_cap_db: float = 100.0
    filter: dsp.FilterSpec | None = None

    def __post_init__(self) -> None:
        if self.full_scale is not None and self.full_scale <= 0:
            raise InvalidInputError(f"full_scale must be positive, got {self.full_scale}")
        if self.max_frames < 1:
            raise InvalidInputError(f"max_frames must be positive, got {self.max_frames}")

    def full_scale_for(self, bit_depth: int) -> float:
        if self.full_scale is not None:
            return self.full_scale
        return FULL_SCALE_8BIT * 2.0 ** (bit_depth - 8)

    def as_dict(self) -> dict:
        return {
            "full_scale": self.full_scale,
            "max_frames": self.max_frames,
            "snr_cap_db": self.snr_cap_db,
            "filter": self.filter.as_dict() if self.filter is not None else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MeasureConfig":
        filt = d.get("filter")
        return cls(
            full_scale=None if d.get("full_scale") is None else float(d["full_scale"]),
            max_frames=int(d["max_frames"]),
            snr_cap_db=float(d["snr_cap_db"]),
            filter=None if filt is None else dsp.FilterSpec.from_dict(filt),
        )


@dataclass(frozen=True)
class Measurement:
    """One SNR measurement result.

    ``v_ref`` and ``v_n`` are in ADC code units; ``error_margin`` is the
    statistical uncertainty of ``v_n`` (``v_n / sqrt(n_samples)``).
    ``saturated`` is set when zero noise forced the configured SNR cap.
    """

    v_ref: float
    v_n: float
    snr_db: float
    error_margin: float
    n_samples: int
    filtered: bool
    frames_used: int
    saturated: bool

    def as_dict(self) -> dict:
        return {
            "v_ref": self.v_ref,
            "v_n": self.v_n,
            "snr_db": self.snr_db,
            "error_margin": self.error_margin,
            "n_samples": self.n_samples,
            "filtered": self.filtered,
            "frames_used": self.frames_used,
            "saturated": self.saturated,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Measurement":
        return cls(
            v_ref=float(d["v_ref"]),
            v_n=float(d["v_n"]),
            snr_db=float(d["snr_db"]),
            error_margin=float(d["error_margin"]),
            n_samples=int(d["n_samples"]),
            filtered=bool(d["filtered"]),
            frames_used=int(d["frames_used"]),
            saturated=bool(d["saturated"]),
        )


@dataclass(frozen=True)
class PsnrResult:
    """PSNR between an original and a degraded pixel plane."""

    mse: float
    psnr_db: float
    bits_per_pixel: int
    per_channel: tuple[tuple[str, float], ...] | None = None
    saturated: bool = False


def _exact_sum(values: np.ndarray) -> float:
    # fsum is exactly rounded, hence independent of summation order.
    return math.fsum(values.tolist())


def _exact_mean(values: np.ndarray) -> float:
    return _exact_sum(values) / values.size


def estimate_reference_level(line: LineRecord) -> float:
    """Black level of a blanked line: arithmetic mean over the window."""
    return _exact_mean(line.window_samples().astype(np.float64))


def noise_rms(line: LineRecord, v_ref: float) -> float:
    """Noise RMS over the window: sqrt(sum((x - v_ref)^2) / (N - 1))."""
    if not math.isfinite(v_ref):
        raise InvalidInputError(f"v_ref must be finite, got {v_ref}")
    return _deviation_rms(line.window_samples().astype(np.float64), v_ref)


def _deviation_rms(values: np.ndarray, v_ref: float) -> float:
    n = values.size
    if n < 2:
        raise InvalidInputError(f"need at least 2 samples for noise RMS, got {n}")
    return math.sqrt(_exact_sum(np.square(values - v_ref)) / (n - 1))


def snr_db(v_n: float, config: MeasureConfig, bit_depth: int = 8) -> tuple[float, bool]:
    """SNR in dB for a noise RMS, as (value, saturated).

    ``20 * log10(full_scale / v_n)`` for positive noise; zero noise returns
    the configured cap with ``saturated`` set.
    """
    if v_n < 0:
        raise InvalidInputError(f"noise RMS cannot be negative, got {v_n}")
    if v_n == 0.0:
        return (config.snr_cap_db, True)
    return (20.0 * math.log10(config.full_scale_for(bit_depth) / v_n), False)


def error_margin(v_n: float, n_samples: int) -> float:
    """Statistical error of the noise estimate: v_n / sqrt(n_samples)."""
    if n_samples < 1:
        raise InvalidInputError(f"n_samples must be at least 1, got {n_samples}")
    if v_n < 0:
        raise InvalidInputError(f"noise RMS cannot be negative, got {v_n}")
    return v_n / math.sqrt(n_samples)


def error_margin_db(n_samples: int) -> float:
    """Error margin mapped to dB via the local slope of the SNR curve.

    d(snr_db)/d(v_n) = -20 / (ln 10 * v_n), so an uncertainty of
    v_n / sqrt(N) code units is 20 / (ln 10 * sqrt(N)) dB regardless of
    the noise level.
    """
    if n_samples < 1:
        raise InvalidInputError(f"n_samples must be at least 1, got {n_samples}")
    return 20.0 / (_LN10 * math.sqrt(n_samples))


def measure_line(line: LineRecord, config: MeasureConfig | None = None) -> Measurement:
    """Measure one line. Equivalent to :func:`accumulate` on a single line."""
    return accumulate([line], config)


def accumulate(
    lines: Iterable[LineRecord], config: MeasureConfig | None = None
) -> Measurement:
    """Pool the window samples of several lines into one measurement.

    All samples form a single population: the reference level is the global
    mean of the unfiltered windows and the noise RMS runs over the pooled
    population, so the error margin shrinks with the total sample count.
    The distinct frame count may not exceed ``config.max_frames``. Results
    are bit-identical under any reordering of the input lines.
    """
    if config is None:
        config = MeasureConfig()
    lines = list(lines)
    if not lines:
        raise InvalidInputError("no lines to accumulate")

    bit_depths = {line.bit_depth for line in lines}
    if len(bit_depths) > 1:
        raise InvalidInputError(f"mixed bit depths in accumulation: {sorted(bit_depths)}")
    rates = {line.sample_rate_hz for line in lines}
    if len(rates) > 1:
        raise InvalidInputError(f"mixed sample rates in accumulation: {sorted(rates)}")
    bit_depth = bit_depths.pop()
    sample_rate_hz = rates.pop()

    frames_used = len({line.frame_index for line in lines})
    if frames_used > config.max_frames:
        raise InvalidInputError(
            f"{frames_used} frames exceed the {config.max_frames}-frame limit"
        )

    windows = [line.window_samples().astype(np.float64) for line in lines]
    pooled_raw = np.concatenate(windows)
    v_ref = _exact_mean(pooled_raw)

    if config.filter is not None:
        taps = dsp.design_lowpass(config.filter, sample_rate_hz)
        gain = dsp.noise_gain(taps)
        try:
            population = np.concatenate([dsp.apply_filter(w, taps) for w in windows])
        except InvalidInputError as exc:
            raise MeasurementImpossibleError(
                f"measurement window too short for the {len(taps)}-tap filter: {exc}"
            ) from exc
    else:
        gain = 1.0
        population = pooled_raw

    n = int(population.size)
    # Filtering narrows the noise bandwidth; dividing by the filter's white
    # noise gain refers the in-band RMS back to an equivalent full-band
    # level, keeping filtered and unfiltered readings comparable.
    v_n = _deviation_rms(population, v_ref) / gain
    snr, saturated = snr_db(v_n, config, bit_depth)
    return Measurement(
        v_ref=v_ref,
        v_n=v_n,
        snr_db=snr,
        error_margin=error_margin(v_n, n),
        n_samples=n,
        filtered=config.filter is not None,
        frames_used=frames_used,
        saturated=saturated,
    )


def psnr(
    original,
    decoded,
    bits_per_pixel: int = 8,
    cap_db: float = 100.0,
    channel_labels: Sequence[str] | None = None,
) -> PsnrResult:
    """Peak SNR between two equally shaped pixel planes.

    2-D inputs are a single plane; 3-D inputs are height x width x channels
    and additionally get a per-channel breakdown while ``mse``/``psnr_db``
    stay pooled over all pixels. Zero MSE reports ``cap_db`` and sets the
    saturation flag.
    """
    a = np.asarray(original)
    b = np.asarray(decoded)
    if a.shape != b.shape:
        raise InvalidInputError(f"plane shapes differ: {a.shape} vs {b.shape}")
    if a.ndim not in (2, 3):
        raise InvalidInputError(f"expected a 2-D or 3-D pixel plane, got {a.ndim}-D")
    if not 1 <= bits_per_pixel <= 16:
        raise InvalidInputError(f"bits_per_pixel must be 1..16, got {bits_per_pixel}")

    diff = a.astype(np.float64) - b.astype(np.float64)
    sq = np.square(diff)
    peak = float((1 << bits_per_pixel) - 1)

    def one(mse: float) -> tuple[float, bool]:
        if mse == 0.0:
            return (cap_db, True)
        return (10.0 * math.log10(peak * peak / mse), False)

    mse = float(np.mean(sq))
    value, saturated = one(mse)

    per_channel = None
    if a.ndim == 3:
        n_ch = a.shape[2]
        if channel_labels is None:
            labels = [f"ch{i}" for i in range(n_ch)]
        elif len(channel_labels) != n_ch:
            raise InvalidInputError(
                f"{len(channel_labels)} labels supplied for {n_ch} channels"
            )
        else:
            labels = [str(s) for s in channel_labels]
        per_channel = tuple(
            (labels[i], one(float(np.mean(sq[:, :, i])))[0]) for i in range(n_ch)
        )

    return PsnrResult(
        mse=mse,
        psnr_db=value,
        bits_per_pixel=bits_per_pixel,
        per_channel=per_channel,
        saturated=saturated,
    )
