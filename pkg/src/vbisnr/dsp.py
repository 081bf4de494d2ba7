"""Low-pass pre-filtering and line spectra.

The low-pass filter implements the "filtered" measurement mode: a
linear-phase windowed-sinc FIR whose group delay is removed by trimming,
so the filtered sample population stays free of edge padding artifacts.
Spectra are exported for offline plotting of individual lines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy import signal

from .errors import InvalidInputError

if TYPE_CHECKING:
    from .measure import LineRecord

# Magnitudes below this are reported as the floor instead of -inf.
DB_FLOOR = -200.0

_FILTER_KINDS = ("windowed-sinc-lowpass",)


@dataclass(frozen=True)
class FilterSpec:
    """Low-pass pre-filter description.

    The passband ends at ``cutoff_hz``; the stopband starts at
    ``cutoff_hz + transition_hz`` and is at least ``stopband_atten_db``
    down from there on.
    """

    cutoff_hz: float = 2.0e6
    transition_hz: float = 0.5e6
    stopband_atten_db: float = 60.0
    kind: str = "windowed-sinc-lowpass"

    def __post_init__(self) -> None:
        if self.cutoff_hz <= 0:
            raise InvalidInputError(f"cutoff_hz must be positive, got {self.cutoff_hz}")
        if self.transition_hz <= 0:
            raise InvalidInputError(
                f"transition_hz must be positive, got {self.transition_hz}"
            )
        if self.stopband_atten_db < 20:
            raise InvalidInputError(
                f"stopband_atten_db must be at least 20, got {self.stopband_atten_db}"
            )
        if self.kind not in _FILTER_KINDS:
            raise InvalidInputError(f"unknown filter kind {self.kind!r}")

    def as_dict(self) -> dict:
        return {
            "cutoff_hz": self.cutoff_hz,
            "transition_hz": self.transition_hz,
            "stopband_atten_db": self.stopband_atten_db,
            "kind": self.kind,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FilterSpec":
        return cls(
            cutoff_hz=float(d["cutoff_hz"]),
            transition_hz=float(d["transition_hz"]),
            stopband_atten_db=float(d["stopband_atten_db"]),
            kind=str(d["kind"]),
        )


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Single-sided magnitude spectrum of one line.

    Bin 0 holds the line's mean level (the black level on a blanked line);
    it is measured separately and removed before windowing so that leakage
    from the large DC term cannot mask low-level structure in the AC bins.
    Magnitudes are in dB relative to the nominal full-scale amplitude.
    """

    bin_hz: float
    magnitudes_db: np.ndarray
    window_kind: str = "hann"
    fft_size: int = 0

    def frequencies_hz(self) -> np.ndarray:
        return np.arange(len(self.magnitudes_db)) * self.bin_hz


def design_lowpass(spec: FilterSpec, sample_rate_hz: float) -> np.ndarray:
    """Design the FIR taps for ``spec`` at the given sample rate.

    Returns an odd-length, exactly symmetric tap vector with unity DC gain.
    The length comes from the Kaiser estimate for the requested stopband
    attenuation over the requested transition width; the estimate is
    checked against the realized response at the stopband edge and the
    filter is lengthened if it falls short.
    """
    if sample_rate_hz <= 0:
        raise InvalidInputError(f"sample_rate_hz must be positive, got {sample_rate_hz}")
    nyquist = sample_rate_hz / 2.0
    stop_edge = spec.cutoff_hz + spec.transition_hz
    if stop_edge >= nyquist:
        raise InvalidInputError(
            f"cutoff {spec.cutoff_hz} Hz + transition {spec.transition_hz} Hz "
            f"reaches Nyquist ({nyquist} Hz)"
        )

    numtaps, beta = signal.kaiserord(spec.stopband_atten_db, spec.transition_hz / nyquist)
    numtaps |= 1  # linear phase with integer group delay
    for _ in range(16):
        taps = signal.firwin(
            numtaps,
            spec.cutoff_hz + spec.transition_hz / 2.0,
            window=("kaiser", beta),
            fs=sample_rate_hz,
        )
        # Enforce exact tap symmetry and unity DC gain.
        taps = 0.5 * (taps + taps[::-1])
        taps = taps / taps.sum()
        if _response_db(taps, stop_edge, sample_rate_hz) <= -spec.stopband_atten_db:
            break
        numtaps += 2
    taps.flags.writeable = False
    return taps


def _response_db(taps: np.ndarray, freq_hz: float, sample_rate_hz: float) -> float:
    k = np.arange(len(taps))
    h = np.sum(taps * np.exp(-2j * np.pi * freq_hz * k / sample_rate_hz))
    return 20.0 * math.log10(max(abs(h), 1e-300))


def noise_gain(taps: np.ndarray) -> float:
    """RMS gain of the filter for white noise input, sqrt(sum taps^2)."""
    return float(np.sqrt(np.sum(np.square(taps))))


def apply_filter(samples, taps) -> np.ndarray:
    """Filter ``samples``, returning only the fully-supported region.

    The output is the valid convolution: (len(taps) - 1) / 2 samples are
    trimmed from each end, which removes the symmetric group delay and
    avoids injecting padded values. Output length is
    ``len(samples) - len(taps) + 1``.
    """
    x = np.asarray(samples, dtype=np.float64)
    t = np.asarray(taps, dtype=np.float64)
    if x.ndim != 1 or t.ndim != 1:
        raise InvalidInputError("apply_filter expects one-dimensional inputs")
    if len(x) <= len(t):
        raise InvalidInputError(
            f"input of {len(x)} samples is not longer than the {len(t)}-tap filter"
        )
    return np.convolve(x, t, mode="valid")


def line_spectrum(line: "LineRecord", fft_size: int | None = None) -> Spectrum:
    """Hann-windowed, zero-padded magnitude spectrum of a whole line.

    ``fft_size`` must be a power of two no smaller than the line length;
    it defaults to the smallest such power of two.
    """
    n = len(line.samples)
    if fft_size is None:
        fft_size = 1 << (n - 1).bit_length()
    else:
        if fft_size < 1 or fft_size & (fft_size - 1):
            raise InvalidInputError(f"fft_size must be a power of two, got {fft_size}")
        if fft_size < n:
            raise InvalidInputError(
                f"fft_size {fft_size} is smaller than the line ({n} samples)"
            )

    x = np.asarray(line.samples, dtype=np.float64)
    mean = float(x.mean())
    window = signal.windows.hann(n, sym=False)
    bins = np.fft.rfft((x - mean) * window, n=fft_size)

    # Single-sided amplitude normalization: a full-scale sinusoid reads 0 dB.
    mags = np.abs(bins) * (2.0 / window.sum())
    mags[-1] /= 2.0  # Nyquist bin is not mirrored
    mags[0] = abs(mean)

    full_scale = 219.0 * 2.0 ** (line.bit_depth - 8)
    floor = full_scale * 10.0 ** (DB_FLOOR / 20.0)
    db = 20.0 * np.log10(np.maximum(mags, floor) / full_scale)
    db.flags.writeable = False
    return Spectrum(
        bin_hz=line.sample_rate_hz / fft_size,
        magnitudes_db=db,
        window_kind="hann",
        fft_size=fft_size,
    )
