"""Input signal variants and their exact piecewise decomposition.

Every signal the simulator accepts is, on any bounded window, a finite
concatenation of segments on which it is either constant or a pure sinusoid.
``iter_segments`` performs that decomposition; the simulator then propagates
each segment through a closed-form augmented exponential, so signal handling
is the only place where switching structure lives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .exceptions import DimensionError

__all__ = [
    "Zero",
    "Constant",
    "Sinusoid",
    "BangBangInput",
    "PeriodicExtension",
    "InputSignal",
    "evaluate",
    "signal_dim",
    "sup_norm",
    "iter_segments",
]


@dataclass(frozen=True)
class Zero:
    """The zero input of a given channel count."""

    dim: int = 1

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise DimensionError("dim must be >= 1")


@dataclass(frozen=True)
class Constant:
    """u(t) = u0 for all t."""

    u0: np.ndarray

    def __post_init__(self) -> None:
        u = np.atleast_1d(np.asarray(self.u0, dtype=float)).reshape(-1)
        if not np.all(np.isfinite(u)):
            raise ValueError("u0 contains non-finite entries")
        object.__setattr__(self, "u0", u)


@dataclass(frozen=True)
class Sinusoid:
    """u(t) = direction * sin(omega t + phase) with a unit direction vector."""

    direction: np.ndarray
    omega: float
    phase: float = 0.0

    def __post_init__(self) -> None:
        d = np.atleast_1d(np.asarray(self.direction, dtype=float)).reshape(-1)
        norm = np.linalg.norm(d)
        if not np.isfinite(norm) or abs(norm - 1.0) > 1e-9:
            raise ValueError("direction must have unit Euclidean norm")
        if not (self.omega > 0):
            raise ValueError("omega must be positive")
        object.__setattr__(self, "direction", d)


@dataclass(frozen=True)
class BangBangInput:
    """Scalar switching input on [0, horizon]: +-1 with sign flips at
    switch_times, zero after the horizon.

    ``initial_sign`` applies on [0, first switch); each switch time flips the
    sign (right-continuous).  ``zero_kernel`` marks the degenerate case where
    the optimizing kernel vanishes identically, making the input zero.
    """

    horizon: float
    switch_times: np.ndarray
    initial_sign: int = 1
    zero_kernel: bool = False

    def __post_init__(self) -> None:
        if not (self.horizon > 0):
            raise ValueError("horizon must be positive")
        s = np.atleast_1d(np.asarray(self.switch_times, dtype=float)).reshape(-1)
        if s.size and (np.any(np.diff(s) <= 0) or s[0] <= 0 or s[-1] >= self.horizon):
            raise ValueError("switch times must be strictly increasing inside (0, horizon)")
        if self.initial_sign not in (-1, 1):
            raise ValueError("initial_sign must be +1 or -1")
        object.__setattr__(self, "switch_times", s)

    def sign_at(self, t: float) -> float:
        flips = int(np.searchsorted(self.switch_times, t, side="right"))
        return float(self.initial_sign * (-1) ** flips)


@dataclass(frozen=True)
class PeriodicExtension:
    """Periodic repetition of ``base`` restricted to [0, base_span], padded
    with zero on (base_span, period]."""

    base: "InputSignal"
    base_span: float
    period: float

    def __post_init__(self) -> None:
        if not (self.base_span >= 0):
            raise ValueError("base_span must be nonnegative")
        if not (self.period >= self.base_span) or self.period <= 0:
            raise ValueError("period must be positive and >= base_span")


InputSignal = Union[Zero, Constant, Sinusoid, BangBangInput, PeriodicExtension]


def signal_dim(signal: InputSignal) -> int:
    """Number of input channels the signal drives."""
    if isinstance(signal, Zero):
        return signal.dim
    if isinstance(signal, Constant):
        return signal.u0.size
    if isinstance(signal, Sinusoid):
        return signal.direction.size
    if isinstance(signal, BangBangInput):
        return 1
    if isinstance(signal, PeriodicExtension):
        return signal_dim(signal.base)
    raise TypeError(f"not an input signal: {signal!r}")


def sup_norm(signal: InputSignal) -> float:
    """Supremum over time of the Euclidean norm of the signal value."""
    if isinstance(signal, Zero):
        return 0.0
    if isinstance(signal, Constant):
        return float(np.linalg.norm(signal.u0))
    if isinstance(signal, Sinusoid):
        return 1.0
    if isinstance(signal, BangBangInput):
        return 0.0 if signal.zero_kernel else 1.0
    if isinstance(signal, PeriodicExtension):
        return sup_norm(signal.base)
    raise TypeError(f"not an input signal: {signal!r}")


def evaluate(signal: InputSignal, t: float) -> np.ndarray:
    """Signal value at time t as a 1-d array."""
    if isinstance(signal, Zero):
        return np.zeros(signal.dim)
    if isinstance(signal, Constant):
        return signal.u0.copy()
    if isinstance(signal, Sinusoid):
        return signal.direction * math.sin(signal.omega * t + signal.phase)
    if isinstance(signal, BangBangInput):
        if signal.zero_kernel or t < 0.0 or t > signal.horizon:
            return np.zeros(1)
        return np.array([signal.sign_at(t)])
    if isinstance(signal, PeriodicExtension):
        local = t - signal.period * math.floor(t / signal.period)
        if local > signal.base_span:
            return np.zeros(signal_dim(signal))
        return evaluate(signal.base, local)
    raise TypeError(f"not an input signal: {signal!r}")


@dataclass(frozen=True)
class Segment:
    """Maximal interval on which the signal is constant or one sinusoid.

    For kind "const", ``value`` holds u; for kind "sin", the signal on the
    segment is direction * sin(omega (t - start) + theta0).
    """

    start: float
    end: float
    kind: str
    value: np.ndarray = field(default=None)  # type: ignore[assignment]
    direction: np.ndarray = field(default=None)  # type: ignore[assignment]
    omega: float = 0.0
    theta0: float = 0.0


def iter_segments(signal: InputSignal, t_end: float) -> list[Segment]:
    """Decompose the signal over [0, t_end] into constant/sinusoid segments."""
    if t_end <= 0:
        return []
    return _segments(signal, 0.0, t_end)


def _segments(signal: InputSignal, offset: float, t_end: float) -> list[Segment]:
    # Segments of signal(t - offset) covering [offset, t_end].
    span = t_end - offset
    if span <= 0:
        return []
    if isinstance(signal, Zero):
        return [Segment(offset, t_end, "const", value=np.zeros(signal.dim))]
    if isinstance(signal, Constant):
        return [Segment(offset, t_end, "const", value=signal.u0.copy())]
    if isinstance(signal, Sinusoid):
        return [
            Segment(
                offset,
                t_end,
                "sin",
                direction=signal.direction,
                omega=signal.omega,
                theta0=signal.phase,
            )
        ]
    if isinstance(signal, BangBangInput):
        if signal.zero_kernel:
            return [Segment(offset, t_end, "const", value=np.zeros(1))]
        out: list[Segment] = []
        bounds = [0.0]
        bounds += [s for s in signal.switch_times.tolist() if s < span]
        bounds.append(min(signal.horizon, span))
        sign = float(signal.initial_sign)
        for lo, hi in zip(bounds[:-1], bounds[1:]):
            if hi > lo:
                out.append(
                    Segment(offset + lo, offset + hi, "const", value=np.array([sign]))
                )
            sign = -sign
        if span > signal.horizon:
            out.append(
                Segment(offset + signal.horizon, t_end, "const", value=np.zeros(1))
            )
        return out
    if isinstance(signal, PeriodicExtension):
        out = []
        k = 0
        dim = signal_dim(signal)
        while True:
            start = offset + k * signal.period
            if start >= t_end:
                break
            span_end = min(start + signal.base_span, t_end)
            if span_end > start:
                out.extend(_segments(signal.base, start, span_end))
            pad_end = min(start + signal.period, t_end)
            if pad_end > start + signal.base_span:
                out.append(
                    Segment(start + signal.base_span, pad_end, "const", value=np.zeros(dim))
                )
            k += 1
        return out
    raise TypeError(f"not an input signal: {signal!r}")
