"""End-to-end extraction pipeline: field -> vortex nodes -> graph ->
components -> reduced sample graphs -> localization -> simple lines ->
analytics. Deterministic for a fixed config and input.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import analysis
from .circulation import DEFAULT_EPSILON, identify_vortex_nodes
from .errors import QvlError, StageError
from .field import ComplexField3D
from .fileio import LineFileFrame
from .localization import LocalizeConfig, localize_graph
from .reduction import reduce_component
from .vectorize import build_line, orient_line, split_at_branches
from .vortexgraph import build_global_graph, extract_components

log = logging.getLogger(__name__)


@dataclass
class PipelineConfig:
    k: int = 5
    epsilon: float = DEFAULT_EPSILON
    resample_step: float = 0.5  # in units of spacing
    localize: bool = True
    blocks: tuple = (4, 4, 4)
    frame: int = 0
    localize_config: LocalizeConfig = dc_field(default_factory=LocalizeConfig)


def _stage(name, entity, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except QvlError as exc:
        raise StageError(name, entity, exc) from exc


def run_pipeline(field: ComplexField3D, config: PipelineConfig | None = None):
    """Run the full extraction on one field; returns (frame, analytics)."""
    config = config or PipelineConfig()
    blocks = tuple(min(b, d) for b, d in zip(config.blocks, field.dims))

    nodes, skipped = _stage("identify", "field", identify_vortex_nodes,
                            field, config.epsilon)
    if skipped:
        log.info("identify: skipped %d singular/boundary nodes", skipped)
    graph = _stage("graph", f"{len(nodes)} nodes", build_global_graph,
                   nodes, field.dims, field.boundary, blocks, field.spacing)
    components = _stage("components", "graph", extract_components, graph)

    lines = []
    events = []
    step = config.resample_step * field.spacing
    for comp in components:
        cid = comp.node_ids[0]
        samples = _stage("reduce", f"component {cid}", reduce_component,
                         graph, comp, config.k)
        if config.localize:
            samples = _stage("localize", f"component {cid}", localize_graph,
                             field, samples, config.localize_config)
        segments, comp_events = _stage("split", f"component {cid}",
                                       split_at_branches, samples,
                                       config.frame, len(events))
        events.extend(comp_events)
        for seg in segments:
            if len(seg) < 2 or (len(seg) < 3 and all(len(a) == 2 for a in seg.adjacency)):
                continue  # too few samples to vectorize; noise-scale fragment
            line = _stage("vectorize", f"component {cid}", build_line,
                          len(lines), seg, step)
            line = _stage("orient", f"line {line.id}", orient_line, field, line)
            lines.append(line)

    frame = LineFileFrame(frame=config.frame, time=field.time, dims=field.dims,
                          spacing=field.spacing, lines=lines, events=events)
    fa = _stage("analytics", f"frame {config.frame}", analysis.frame_analytics,
                config.frame, lines, events, field if lines else None)
    return frame, fa
