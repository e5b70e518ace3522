"""Analytic signal, zero-phase band-pass filtering and Welch spectra."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import signal as sps

from .signals import MultivariateSignal, as_signal

HILBERT_MARGIN_FRACTION = 0.05
MIN_ANALYTIC_LENGTH = 8


@dataclass(frozen=True)
class AnalyticDecomposition:
    """Instantaneous amplitude and phase of every row.

    ``margin`` samples at each end are affected by end effects.
    """

    envelope: np.ndarray
    phase: np.ndarray
    margin: int = 0

    @property
    def reliable(self) -> slice:
        p = self.envelope.shape[1]
        return slice(self.margin, p - self.margin)


@dataclass(frozen=True)
class SpectralDensity:
    """One-sided Welch spectra: ``auto`` is (n, bins), ``cross`` is (n, n, bins)."""

    frequencies: np.ndarray
    auto: np.ndarray
    cross: np.ndarray
    segment_length: int

    def coherence(self) -> np.ndarray:
        """Magnitude-squared coherence per bin, shape (n, n, bins); 0 where a row has no power."""
        denom = self.auto[:, None, :] * self.auto[None, :, :]
        num = np.abs(self.cross) ** 2
        out = np.zeros_like(denom)
        np.divide(num, denom, out=out, where=denom > 0)
        return np.clip(out, 0.0, 1.0)


def hilbert_margin(p: int) -> int:
    return int(math.ceil(HILBERT_MARGIN_FRACTION * p))


def analytic_signal(signal: MultivariateSignal) -> AnalyticDecomposition:
    """Envelope and phase from the FFT-based discrete Hilbert transform of each row.

    Phases are in (-pi, pi]; a zero-modulus sample has phase 0.
    """
    signal = as_signal(signal)
    if signal.p < MIN_ANALYTIC_LENGTH:
        raise ValueError(f"analytic signal needs at least {MIN_ANALYTIC_LENGTH} samples")
    z = sps.hilbert(signal.data, axis=1)
    env = np.abs(z)
    phase = np.angle(z)
    phase[phase <= -np.pi] = np.pi
    phase[env == 0] = 0.0
    return AnalyticDecomposition(env, phase, hilbert_margin(signal.p))


def bandpass_taps(sample_rate: float, low_hz: float, high_hz: float) -> np.ndarray:
    """Hamming windowed-sinc band-pass taps of even order ``4 fs / low``."""
    nyq = sample_rate / 2.0
    if not (0 < low_hz < high_hz < nyq):
        raise ValueError(
            f"band edges must satisfy 0 < low < high < {nyq:g}, got ({low_hz}, {high_hz})"
        )
    order = int(round(4.0 * sample_rate / low_hz / 2.0)) * 2
    return sps.firwin(order + 1, [low_hz, high_hz], window="hamming", pass_zero=False, fs=sample_rate)


def bandpass(signal: MultivariateSignal, low_hz: float, high_hz: float) -> MultivariateSignal:
    """Zero-phase FIR band-pass of every row.

    The first and last :func:`bandpass_margin` samples are distorted by the
    implicit zero padding.
    """
    signal = as_signal(signal)
    taps = bandpass_taps(signal.sample_rate, low_hz, high_hz)
    if signal.p < taps.size:
        raise ValueError(f"signal of {signal.p} samples shorter than {taps.size}-tap filter")
    # odd-length kernel with mode="same" removes the (len - 1) / 2 group delay
    out = sps.fftconvolve(signal.data, taps[None, :], mode="same", axes=1)
    return signal.with_data(out)


def bandpass_margin(sample_rate: float, low_hz: float, high_hz: float) -> int:
    """Filter half-order in samples."""
    return (bandpass_taps(sample_rate, low_hz, high_hz).size - 1) // 2


def welch_segment_length(p: int) -> int:
    """``min(256, p // 4)`` rounded down to a power of two."""
    target = min(256, p // 4)
    if target < 2:
        raise ValueError(f"signal of {p} samples too short for Welch estimation")
    return 1 << (target.bit_length() - 1)


def welch_spectra(signal: MultivariateSignal, segment_length: int | None = None) -> SpectralDensity:
    """Hann-windowed, 50%-overlap Welch auto- and cross-spectral densities.

    Segments are mean-detrended; spectra are one-sided densities so that the
    integral of ``auto`` over frequency recovers the variance.
    """
    signal = as_signal(signal)
    p = signal.p
    nseg = segment_length or welch_segment_length(p)
    if p < 2 * nseg:
        raise ValueError(f"need at least {2 * nseg} samples, got {p}")
    step = nseg // 2
    starts = np.arange(0, p - nseg + 1, step)
    win = sps.get_window("hann", nseg)
    idx = starts[:, None] + np.arange(nseg)[None, :]
    segs = signal.data[:, idx]  # (n, k, nseg)
    segs = segs - segs.mean(axis=2, keepdims=True)
    spec = np.fft.rfft(segs * win, axis=2)  # (n, k, bins)
    scale = 1.0 / (signal.sample_rate * (win**2).sum())
    cross = np.einsum("ikf,jkf->ijf", spec, spec.conj()) * (scale / len(starts))
    # one-sided: double everything except DC and (even-length) Nyquist
    if nseg % 2 == 0:
        cross[..., 1:-1] *= 2.0
    else:
        cross[..., 1:] *= 2.0
    auto = np.real(np.einsum("iif->if", cross)).copy()
    idx_n = np.arange(signal.n)
    cross[idx_n, idx_n, :] = auto
    freqs = np.fft.rfftfreq(nseg, d=1.0 / signal.sample_rate)
    return SpectralDensity(freqs, auto, cross, nseg)
