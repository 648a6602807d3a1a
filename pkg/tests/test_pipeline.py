import numpy as np
import pytest

from qvl.fileio import LineFileFrame
from qvl.pipeline import PipelineConfig, run_pipeline
from qvl.vectorize import LineType, classify


class TestRunPipeline:
    def test_straight_vortex(self, straight64):
        frame, fa = run_pipeline(straight64)
        assert isinstance(frame, LineFileFrame)
        assert len(frame.lines) == 1
        line = frame.lines[0]
        assert not line.closed
        assert line.orientation == 1
        assert frame.events == []
        assert fa.line_count == 1
        assert fa.event_count == 0
        assert fa.total_length == pytest.approx(line.length)
        assert fa.error_metric < 0.05
        # every polyline point close to the analytic core in-plane
        d = np.hypot(line.polyline[:, 0] - 32.3, line.polyline[:, 1] - 32.4)
        assert np.max(d) < 0.1

    def test_ring(self, ring64):
        frame, fa = run_pipeline(ring64)
        assert len(frame.lines) == 1
        line = frame.lines[0]
        assert line.closed
        expected = 2 * np.pi * 10.0
        assert abs(line.length - expected) / expected < 0.02
        assert frame.events == []

    def test_crossing_produces_events_and_simple_lines(self, crossing64):
        frame, fa = run_pipeline(crossing64)
        assert len(frame.events) >= 1
        # at least one event near the analytic intersection (32.5, 32.5, 32.5)
        dists = [np.linalg.norm(np.asarray(ev.position) - 32.5)
                 for ev in frame.events]
        assert min(dists) < 1.5
        assert all(ev.degree >= 3 for ev in frame.events)
        assert len(frame.lines) >= 2

    def test_empty_field(self, uniform16):
        frame, fa = run_pipeline(uniform16)
        assert frame.lines == []
        assert frame.events == []
        assert fa.line_count == 0
        assert fa.error_metric == 0.0

    def test_deterministic_across_runs(self, ring64):
        f1, _ = run_pipeline(ring64)
        f2, _ = run_pipeline(ring64)
        assert len(f1.lines) == len(f2.lines)
        for a, b in zip(f1.lines, f2.lines):
            np.testing.assert_array_equal(a.polyline, b.polyline)
            np.testing.assert_array_equal(a.control_points, b.control_points)
            assert a.length == b.length

    def test_block_config_equivalence(self, straight64):
        # different block splits must not change the output at all
        fa1, _ = run_pipeline(straight64, PipelineConfig(blocks=(1, 1, 1)))
        fa4, _ = run_pipeline(straight64, PipelineConfig(blocks=(4, 4, 4)))
        assert len(fa1.lines) == len(fa4.lines)
        for a, b in zip(fa1.lines, fa4.lines):
            np.testing.assert_array_equal(a.polyline, b.polyline)

    def test_no_localize_flag(self, ring64):
        frame_loc, fa_loc = run_pipeline(ring64, PipelineConfig(localize=True))
        frame_raw, fa_raw = run_pipeline(ring64, PipelineConfig(localize=False))
        assert len(frame_raw.lines) == 1
        assert fa_loc.error_metric < fa_raw.error_metric

    def test_spacing_carries_through(self, straight32):
        from qvl.field import ComplexField3D
        f = ComplexField3D(straight32.values, 0.5)
        frame, _ = run_pipeline(f)
        assert frame.spacing == 0.5
        # core sits at half the domain-unit position of the spacing-1 case
        line = frame.lines[0]
        d = np.hypot(line.polyline[:, 0] - 16.3 * 0.5,
                     line.polyline[:, 1] - 16.4 * 0.5)
        assert np.max(d) < 0.1 * 0.5

    def test_frame_index_propagates(self, ring64):
        frame, fa = run_pipeline(ring64, PipelineConfig(frame=9))
        assert frame.frame == 9
        assert fa.frame == 9
