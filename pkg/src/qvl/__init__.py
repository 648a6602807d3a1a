"""Quantum-vortex core line extraction, vectorization, and analysis."""

from .field import (
    Boundary,
    ComplexField3D,
    NlkgState,
    PotentialParams,
    RandomPotential,
    combine_fields,
    density_at,
    gen_random_potential,
    gen_straight_vortex,
    gen_vortex_ring,
    nlkg_step,
    phase_at_node,
    velocity_at_node,
)
from .circulation import VortexNode, identify_vortex_nodes, plane_circulation
from .vortexgraph import Component, VortexGraph, build_global_graph, extract_components
from .reduction import SampleGraph, box_subgraph, mean_estimator, reduce_component
from .localization import LocalizeConfig, localize_graph, localize_sample, pseudo_vorticity
from .vectorize import (
    LineType,
    ReconnectionEvent,
    VortexLine,
    classify,
    fit_and_resample,
    orient_line,
    reorder,
    split_at_branches,
)
from .analysis import (
    FrameAnalytics,
    collect_events,
    density_error_metric,
    filter_by_length,
    line_length,
    time_series,
)
from .pipeline import PipelineConfig, run_pipeline

__version__ = "0.1.0"
