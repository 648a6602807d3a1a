import math

import numpy as np
import pytest

from qvl.analysis import (
    FrameAnalytics,
    collect_events,
    density_error_metric,
    filter_by_length,
    frame_analytics,
    length_histogram,
    line_length,
    time_series,
)
from qvl.errors import ContractViolation
from qvl.field import ComplexField3D
from qvl.vectorize import ReconnectionEvent, VortexLine


def make_line(length, closed=False, line_id=0):
    """Straight polyline of the requested length along z."""
    n = max(2, int(length) + 1)
    z = np.linspace(0.0, length, n)
    poly = np.stack([np.full(n, 5.0), np.full(n, 5.0), z], axis=1)
    if closed:
        # closing segment contributes, so shorten the open part accordingly
        poly = poly[:-1]
    return VortexLine(id=line_id, closed=closed, control_points=poly,
                      polyline=poly, length=0.0)


class TestLineLength:
    def test_open(self):
        assert line_length(make_line(7.0)) == pytest.approx(7.0)

    def test_closed_includes_closing_segment(self):
        square = np.array([[0, 0, 0], [3, 0, 0], [3, 4, 0]], dtype=float)
        ln = VortexLine(id=0, closed=True, control_points=square,
                        polyline=square, length=0.0)
        assert line_length(ln) == pytest.approx(3 + 4 + 5)


class TestFilterByLength:
    def test_half_open_semantics(self):
        lines = [make_line(L, line_id=i) for i, L in enumerate([2.0, 5.0, 9.0])]
        got = filter_by_length(lines, 2.0, 5.0)
        assert [ln.id for ln in got] == [0]  # lo inclusive, hi exclusive
        got = filter_by_length(lines, 2.0, 5.0 + 1e-9)
        assert [ln.id for ln in got] == [0, 1]
        got = filter_by_length(lines, 0.0, float("inf"))
        assert len(got) == 3

    def test_order_preserved(self):
        lines = [make_line(L, line_id=i) for i, L in enumerate([9.0, 2.0, 5.0])]
        got = filter_by_length(lines, 0.0, 100.0)
        assert [ln.id for ln in got] == [0, 1, 2]

    def test_bad_range(self):
        with pytest.raises(ContractViolation):
            filter_by_length([], 5.0, 5.0)


class TestLengthHistogram:
    def test_counts(self):
        lines = [make_line(L) for L in [1.0, 2.0, 2.5, 7.0]]
        hist = length_histogram(lines, [0.0, 2.0, 5.0, 10.0])
        assert hist == [((0.0, 2.0), 1), ((2.0, 5.0), 2), ((5.0, 10.0), 1)]


class TestCollectEvents:
    def test_tagging_and_series(self):
        e1 = ReconnectionEvent(id=0, position=np.zeros(3), degree=3)
        e2 = ReconnectionEvent(id=1, position=np.ones(3), degree=4)
        e3 = ReconnectionEvent(id=2, position=np.ones(3), degree=3)
        per_frame, series = collect_events([(0, [e1]), (2, [e2, e3])])
        assert set(per_frame) == {0, 2}
        assert [ev.frame for ev in per_frame[2]] == [2, 2]
        assert series == [(0, 1), (2, 2)]


class TestDensityErrorMetric:
    def test_uniform_field_gives_one(self, uniform16):
        # every sample sees density 1 and the mean density is 1
        ln = make_line(6.0)
        assert density_error_metric(uniform16, [ln]) == pytest.approx(1.0)

    def test_scale_invariant_in_field_amplitude(self, uniform16):
        f2 = ComplexField3D(2.0 * uniform16.values, 1.0)
        ln = make_line(6.0)
        assert density_error_metric(f2, [ln]) == pytest.approx(1.0)

    def test_core_samples_score_low(self, straight64):
        on_core = np.array([[32.3, 32.4, z] for z in np.arange(10.0, 50.0)])
        off_core = on_core + np.array([5.0, 5.0, 0.0])
        ln_on = VortexLine(0, False, on_core, on_core, length=0.0)
        ln_off = VortexLine(1, False, off_core, off_core, length=0.0)
        e_on = density_error_metric(straight64, [ln_on])
        e_off = density_error_metric(straight64, [ln_off])
        assert e_on < 0.05
        assert e_off > 10 * e_on

    def test_contracts(self, uniform16):
        with pytest.raises(ContractViolation):
            density_error_metric(uniform16, [])
        zero = ComplexField3D(np.zeros((4, 4, 4), dtype=complex), 1.0)
        with pytest.raises(ContractViolation):
            density_error_metric(zero, [make_line(2.0)])


class TestFrameAnalytics:
    def test_fields_and_total(self, uniform16):
        lines = [make_line(L, line_id=i) for i, L in enumerate([3.0, 4.0])]
        events = [ReconnectionEvent(id=0, position=np.zeros(3), degree=3)]
        fa = frame_analytics(5, lines, events, uniform16)
        assert fa.frame == 5
        assert fa.line_count == 2
        assert fa.total_length == pytest.approx(7.0)
        assert fa.event_count == 1
        assert fa.error_metric == pytest.approx(1.0)
        assert sum(c for _, c in fa.length_histogram) == 2

    def test_no_field_no_metric(self):
        fa = frame_analytics(0, [make_line(2.0)], [])
        assert fa.error_metric == 0.0

    def test_empty_frame(self):
        fa = frame_analytics(1, [], [])
        assert fa.line_count == 0
        assert fa.total_length == 0.0

    def test_time_series(self):
        rows = [FrameAnalytics(i, i + 1, 10.0 * i, i % 2, [], 0.0)
                for i in range(4)]
        ts = time_series(rows)
        assert ts == [(0, 0.0, 0, 1), (1, 10.0, 1, 2),
                      (2, 20.0, 0, 3), (3, 30.0, 1, 4)]
