"""Quantitative analytics over vectorized frames: lengths, length-range
filtering, reconnection statistics, the density-error metric, and time
series assembly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation
from .field import ComplexField3D, density_at
from .vectorize import VortexLine, polyline_length


@dataclass
class FrameAnalytics:
    frame: int
    line_count: int
    total_length: float
    event_count: int
    length_histogram: list  # [((lo, hi), count), ...]
    error_metric: float


def line_length(line: VortexLine) -> float:
    """Arc length of the resampled polyline (closing segment included)."""
    return polyline_length(line.polyline, line.closed)


def filter_by_length(lines, lo: float, hi: float):
    """Lines with lo <= length < hi, order preserved."""
    if not lo < hi:
        raise ContractViolation("filter range requires lo < hi")
    return [ln for ln in lines if lo <= line_length(ln) < hi]


def length_histogram(lines, edges):
    """Counts of lines per [edges[i], edges[i+1]) range."""
    counts = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        counts.append(((float(lo), float(hi)), len(filter_by_length(lines, lo, hi))))
    return counts


def collect_events(split_results):
    """Tag events from per-frame split results with their frame index.

    split_results: iterable of (frame_index, events). Returns a dict
    frame -> event list plus the per-frame count series.
    """
    per_frame = {}
    for frame, events in split_results:
        tagged = []
        for ev in events:
            ev.frame = frame
            tagged.append(ev)
        per_frame.setdefault(frame, []).extend(tagged)
    series = [(f, len(per_frame[f])) for f in sorted(per_frame)]
    return per_frame, series


def density_error_metric(field: ComplexField3D, lines) -> float:
    """Mean absolute density over all polyline points, normalized by the
    mean density of the whole field."""
    rho_bar = float(np.mean(field.density()))
    if rho_bar <= 0:
        raise ContractViolation("field has zero mean density")
    values = []
    for ln in lines:
        for p in ln.polyline:
            values.append(abs(density_at(field, p)))
    if not values:
        raise ContractViolation("no polyline points to sample")
    return math.fsum(values) / (rho_bar * len(values))


def frame_analytics(frame: int, lines, events, field=None,
                    histogram_edges=None) -> FrameAnalytics:
    lengths = [line_length(ln) for ln in lines]
    total = math.fsum(lengths)
    if histogram_edges is None:
        top = max(lengths) if lengths else 1.0
        histogram_edges = [0.0, top / 4, top / 2, top, top * 2 + 1e-9]
    hist = length_histogram(lines, histogram_edges)
    err = 0.0
    if field is not None and lines:
        err = density_error_metric(field, lines)
    return FrameAnalytics(frame=frame, line_count=len(lines), total_length=total,
                          event_count=len(events), length_histogram=hist,
                          error_metric=err)


def time_series(analytics):
    """(frame, total_length, event_count, line_count) rows, order preserved."""
    return [(a.frame, a.total_length, a.event_count, a.line_count)
            for a in analytics]
