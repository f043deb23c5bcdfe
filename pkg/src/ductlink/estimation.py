"""Least-squares estimation of the release shape parameter from a trace.

The measured pulse is first time-shifted so its maximum sample coincides
with the model's peak time (which does not depend on the shape parameter),
then the shape parameter is found by bounded scalar minimization of the sum
of squared differences: a coarse grid pass followed by golden-section
refinement. An optional free amplitude absorbs the gap between measured and
nominal signal scales; it has a closed-form optimum per candidate, so the
search stays one-dimensional.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import SystemResponse, response_from_parameters, susceptibility
from .modem import detect_peaks
from .params import SystemParameters
from .trace import SusceptibilityTrace

__all__ = [
    "FitResult",
    "align_by_peak",
    "fit_beta",
    "model_sse",
    "average_pulses",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_FLAT_TOLERANCE = 1e-12


@dataclass
class FitResult:
    beta_hat: float
    time_shift: float
    amplitude_scale: float
    residual_sse: float
    iterations: int
    converged: bool
    window: tuple[float, float]


def _peak_sample_time(times: np.ndarray, values: np.ndarray) -> float:
    imax = int(np.argmax(values))
    rivals = np.count_nonzero(values >= values[imax] - _FLAT_TOLERANCE)
    if rivals > 1:
        raise ValueError("trace maximum is not unique; cannot align by peak")
    return float(times[imax])


def align_by_peak(trace: SusceptibilityTrace, resp: SystemResponse) -> float:
    """Shift that moves the trace's maximum sample onto the model peak time.

    Returns ``t_peak(model) - t_max(trace)``; adding it to the trace times
    aligns the peaks. The maximum sample must be unique (ties closer than
    1e-12 are rejected as flat).
    """
    return resp.t_peak - _peak_sample_time(trace.times, trace.values)


def _default_threshold(values: np.ndarray) -> float:
    top = float(np.max(values))
    if top <= 0:
        raise ValueError("trace has no positive samples; supply a threshold")
    return top / 2.0


def _fit_window(trace: SusceptibilityTrace, threshold: float | None,
                t_peak: float) -> tuple[float, float]:
    """Window around the single above-threshold pulse of the trace."""
    values = trace.values
    thr = _default_threshold(values) if threshold is None else threshold
    above = np.flatnonzero(values > thr)
    if above.size == 0:
        raise ValueError("no above-threshold data")
    gaps = np.flatnonzero(np.diff(above) > 1)
    if gaps.size > 0:
        raise ValueError(
            f"expected a single above-threshold pulse, found {gaps.size + 1}; "
            "supply an explicit window")
    t_first = float(trace.times[above[0]])
    t_last = float(trace.times[above[-1]])
    return (max(trace.t_start, t_first - 2.0 * t_peak),
            min(trace.t_end, t_last + 5.0 * t_peak))


def _prepare(trace: SusceptibilityTrace, p: SystemParameters,
             window: tuple[float, float] | None, threshold: float | None):
    """Validate, window, and peak-align the data; returns times/values/shift."""
    if not (np.all(np.isfinite(trace.times)) and np.all(np.isfinite(trace.values))):
        raise ValueError("trace contains non-finite samples")
    t_peak = response_from_parameters(p, 0.0).t_peak
    if window is None:
        window = _fit_window(trace, threshold, t_peak)
    else:
        window = (float(window[0]), float(window[1]))
    sub = trace.windowed(*window)
    if len(sub) < 2:
        raise ValueError("window contains fewer than 2 samples")
    thr = _default_threshold(sub.values) if threshold is None else threshold
    if not np.any(sub.values > thr):
        raise ValueError("no above-threshold data in window")
    shift = t_peak - _peak_sample_time(sub.times, sub.values)
    return sub.times + shift, sub.values, shift, window


def _sse_and_scale(model: np.ndarray, data: np.ndarray,
                   free_amplitude: bool) -> tuple[float, float]:
    if free_amplitude:
        mm = float(np.dot(model, model))
        scale = float(np.dot(model, data)) / mm if mm > 0 else 0.0
    else:
        scale = 1.0
    r = scale * model - data
    return float(np.dot(r, r)), scale


def model_sse(trace: SusceptibilityTrace, p: SystemParameters, beta: float,
              *, window: tuple[float, float] | None = None,
              threshold: float | None = None,
              free_amplitude: bool = False) -> float:
    """Sum of squared errors of the peak-aligned model at one ``beta``."""
    times, values, _, _ = _prepare(trace, p, window, threshold)
    model = susceptibility(times, response_from_parameters(p, beta), p)
    sse, _ = _sse_and_scale(model, values, free_amplitude)
    return sse


def fit_beta(trace: SusceptibilityTrace, p: SystemParameters,
             *,
             window: tuple[float, float] | None = None,
             threshold: float | None = None,
             free_amplitude: bool = False,
             beta_max: float = 50.0,
             coarse_points: int = 200,
             refine_width: float = 1e-9,
             max_evaluations: int = 400) -> FitResult:
    """Fit the shape parameter (and optionally an amplitude) to one pulse.

    Without an explicit ``window`` the trace must contain exactly one
    above-threshold excursion; the fit window then spans from two peak
    times before it to five after. The returned optimum is never worse
    than any point of the coarse grid.
    """
    times, values, shift, used_window = _prepare(trace, p, window, threshold)

    def objective(beta: float) -> tuple[float, float]:
        model = susceptibility(times, response_from_parameters(p, beta), p)
        return _sse_and_scale(model, values, free_amplitude)

    evaluations = 0
    best_beta = 0.0
    best_sse = math.inf
    best_scale = 1.0

    def evaluate(beta: float) -> float:
        nonlocal evaluations, best_beta, best_sse, best_scale
        sse, scale = objective(beta)
        evaluations += 1
        if sse < best_sse:
            best_beta, best_sse, best_scale = beta, sse, scale
        return sse

    grid = np.linspace(0.0, beta_max, coarse_points).tolist()
    grid_sse = [evaluate(b) for b in grid]
    i_best = int(np.argmin(grid_sse))
    lo = grid[max(i_best - 1, 0)]
    hi = grid[min(i_best + 1, coarse_points - 1)]

    # Golden-section refinement of the bracket around the best grid point.
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = evaluate(x1), evaluate(x2)
    while hi - lo > refine_width and evaluations < max_evaluations:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = evaluate(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = evaluate(x2)

    return FitResult(
        beta_hat=best_beta,
        time_shift=shift,
        amplitude_scale=best_scale,
        residual_sse=best_sse,
        iterations=evaluations,
        converged=hi - lo <= refine_width,
        window=used_window,
    )


def average_pulses(trace: SusceptibilityTrace, count: int,
                   threshold: float) -> SusceptibilityTrace:
    """Average ``count`` consecutive pulses after aligning them by their peaks.

    The first ``count`` detected peaks are used. Each pulse is resampled by
    linear interpolation onto a common grid relative to its peak; the grid
    step is the median sample spacing and its span is limited by the trace
    edges and by half the smallest peak separation, so neighbouring pulses
    do not bleed into the average. Timestamps of the result are anchored at
    the first peak.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    peaks = detect_peaks(trace, threshold)
    if len(peaks) < count:
        raise ValueError(f"need {count} pulses, found {len(peaks)} peaks")
    used = np.array(peaks[:count])

    before = float(np.min(used - trace.t_start))
    after = float(np.min(trace.t_end - used))
    if count > 1:
        half_gap = float(np.min(np.diff(used))) / 2.0
        before = min(before, half_gap)
        after = min(after, half_gap)
    step = float(np.median(np.diff(trace.times)))
    offsets = np.arange(-math.floor(before / step), math.floor(after / step) + 1) * step

    stacked = np.vstack([trace.value_at(t + offsets) for t in used])
    return SusceptibilityTrace(
        used[0] + offsets,
        stacked.mean(axis=0),
        {"averaged_pulses": str(count)},
    )
