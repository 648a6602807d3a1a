"""Command-line pipeline orchestrator.

Verbs: gen (analytic fields), sim (NLKG run emitting QVF1 snapshots),
extract (field -> lines), stats (lines -> CSV/JSON analytics), export
(manifest + frames for the viewer).

Exit codes: 0 success, 2 format error, 3 numerical error, 4 contract
violation.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import fileio
from .analysis import frame_analytics
from .errors import ContractViolation, FormatError, NumericalError, QvlError, StageError
from .field import (
    Boundary,
    ComplexField3D,
    NlkgState,
    PotentialParams,
    RandomPotential,
    combine_fields,
    gen_straight_vortex,
    gen_vortex_ring,
    nlkg_step,
)
from .pipeline import PipelineConfig, run_pipeline

log = logging.getLogger("qvl")


def _parse_dims(s):
    parts = [int(p) for p in s.lower().split("x")]
    if len(parts) == 1:
        parts = parts * 3
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("dims must be N or AxBxC")
    return tuple(parts)


def _gen_field(args) -> ComplexField3D:
    dims = args.dims
    dx = args.spacing
    if args.kind == "straight":
        return gen_straight_vortex(dims, dx, args.axis,
                                   (args.offset[0] * dx, args.offset[1] * dx),
                                   args.winding)
    if args.kind == "ring":
        center = np.array(dims) * dx / 2.0
        return gen_vortex_ring(dims, dx, center, args.radius * dx, args.axis)
    if args.kind == "two-rings":
        c = np.array(dims) * dx
        r = args.radius * dx
        f1 = gen_vortex_ring(dims, dx, c * np.array([0.3, 0.5, 0.5]), r, "z")
        f2 = gen_vortex_ring(dims, dx, c * np.array([0.72, 0.5, 0.5]), r, "z")
        return combine_fields(f1, f2)
    if args.kind == "crossing":
        # cell-center cores give a merged node cluster with a true X junction
        cu = (dims[0] // 2 + 0.5) * dx
        cv = (dims[1] // 2 + 0.5) * dx
        cw = (dims[2] // 2 + 0.5) * dx
        f1 = gen_straight_vortex(dims, dx, "z", (cu, cv), +1)
        f2 = gen_straight_vortex(dims, dx, "x", (cv, cw), +1)
        return combine_fields(f1, f2)
    raise ContractViolation(f"unknown generator kind {args.kind}")


def cmd_gen(args):
    field = _gen_field(args)
    fileio.write_field(args.out, field, precision=args.precision)
    log.info("wrote %s (%s)", args.out, "x".join(map(str, field.dims)))
    return 0


def cmd_sim(args):
    dims = args.dims
    values = np.ones(dims, dtype=np.complex128)
    field = ComplexField3D(values, args.spacing, 0.0, Boundary.PERIODIC)
    potential = None
    if args.V0 > 0:
        potential = RandomPotential(PotentialParams(
            X0=args.X0, T0=args.T0, V0=args.V0, seed=args.seed))
    state = NlkgState.from_initial(field, args.lam, args.dt, potential)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for step in range(1, args.steps + 1):
        state = nlkg_step(state, potential)
        if step % args.snapshot_every == 0 or step == args.steps:
            path = out_dir / f"snap_{step:06d}.qvf"
            fileio.write_field(path, state.current, precision=args.precision)
            log.info("step %d -> %s", step, path)
    return 0


def _pipeline_config(args, frame=0):
    return PipelineConfig(k=args.k, epsilon=args.epsilon,
                          resample_step=args.resample_step,
                          localize=not args.no_localize,
                          blocks=args.blocks, frame=frame)


def cmd_extract(args):
    field = fileio.read_field(args.field)
    frame, fa = run_pipeline(field, _pipeline_config(args, args.frame))
    out = Path(args.out)
    fileio.write_lines_binary(out, frame)
    fileio.write_lines_json(out.with_suffix(".json"), frame)
    fileio.write_analytics_csv(out.with_suffix(".csv"), [fa])
    log.info("%d line(s), %d event(s), total length %.4g",
             fa.line_count, fa.event_count, fa.total_length)
    return 0


def cmd_stats(args):
    analytics = []
    for path in args.frames:
        frame = (fileio.read_lines_json(path) if str(path).endswith(".json")
                 else fileio.read_lines_binary(path))
        field = fileio.read_field(args.field) if args.field else None
        analytics.append(frame_analytics(frame.frame, frame.lines,
                                         frame.events, field))
    fileio.write_analytics_csv(args.out_csv, analytics)
    if args.out_json:
        fileio.write_analytics_json(args.out_json, analytics)
    return 0


def cmd_export(args):
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    frames = []
    analytics = []
    for i, path in enumerate(sorted(args.fields)):
        field = fileio.read_field(path)
        frame, fa = run_pipeline(field, _pipeline_config(args, i))
        frames.append(frame)
        analytics.append(fa)
        fileio.write_lines_binary(out_dir / f"frame_{i:06d}.qvl", frame)
        fileio.write_lines_json(out_dir / f"frame_{i:06d}.json", frame)
    fileio.write_manifest(out_dir / "manifest.json", frames,
                          frames[0].dims if frames else (0, 0, 0),
                          frames[0].spacing if frames else 1.0)
    fileio.write_analytics_json(out_dir / "analytics.json", analytics)
    fileio.write_analytics_csv(out_dir / "analytics.csv", analytics)
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="qvl", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an analytic field")
    g.add_argument("--kind", choices=["straight", "ring", "two-rings", "crossing"],
                   required=True)
    g.add_argument("--dims", type=_parse_dims, default=(64, 64, 64))
    g.add_argument("--spacing", type=float, default=1.0)
    g.add_argument("--axis", default="z")
    g.add_argument("--offset", type=float, nargs=2, default=[32.3, 32.4],
                   help="in-plane core offset in cells (straight)")
    g.add_argument("--winding", type=int, default=1)
    g.add_argument("--radius", type=float, default=10.0,
                   help="ring radius in cells")
    g.add_argument("--precision", type=int, default=8)
    g.add_argument("--out", required=True)
    g.set_defaults(fn=cmd_gen)

    s = sub.add_parser("sim", help="run the NLKG stepper, emitting snapshots")
    s.add_argument("--dims", type=_parse_dims, default=(64, 64, 64))
    s.add_argument("--spacing", type=float, default=0.5)
    s.add_argument("--steps", type=int, default=2000)
    s.add_argument("--dt", type=float, default=0.08)
    s.add_argument("--lambda", dest="lam", type=float, default=1.0)
    s.add_argument("--X0", type=float, default=2.0)
    s.add_argument("--V0", type=float, default=55.0)
    s.add_argument("--T0", type=float, default=0.16)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--snapshot-every", type=int, default=100)
    s.add_argument("--precision", type=int, default=4)
    s.add_argument("--out-dir", required=True)
    s.set_defaults(fn=cmd_sim)

    def add_pipeline_flags(sp):
        sp.add_argument("--k", type=int, default=5)
        sp.add_argument("--epsilon", type=float, default=float(np.pi))
        sp.add_argument("--resample-step", type=float, default=0.5,
                        help="polyline step in cells")
        sp.add_argument("--no-localize", action="store_true")
        sp.add_argument("--blocks", type=_parse_dims, default=(4, 4, 4))

    e = sub.add_parser("extract", help="extract vortex lines from a QVF1 field")
    e.add_argument("--field", required=True)
    e.add_argument("--frame", type=int, default=0)
    e.add_argument("--out", required=True, help="QVL1 output path")
    add_pipeline_flags(e)
    e.set_defaults(fn=cmd_extract)

    st = sub.add_parser("stats", help="analytics from line frames")
    st.add_argument("--frames", nargs="+", required=True)
    st.add_argument("--field", default=None)
    st.add_argument("--out-csv", required=True)
    st.add_argument("--out-json", default=None)
    st.set_defaults(fn=cmd_stats)

    ex = sub.add_parser("export", help="extract many fields into a viewer bundle")
    ex.add_argument("--fields", nargs="+", required=True)
    ex.add_argument("--out-dir", required=True)
    add_pipeline_flags(ex)
    ex.set_defaults(fn=cmd_export)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(message)s")
    try:
        return args.fn(args)
    except FormatError as exc:
        log.error("format error: %s", exc)
        return 2
    except NumericalError as exc:
        log.error("numerical error: %s", exc)
        return 3
    except StageError as exc:
        log.error("%s", exc)
        cause = exc.cause
        if isinstance(cause, FormatError):
            return 2
        if isinstance(cause, NumericalError):
            return 3
        return 4
    except QvlError as exc:
        log.error("%s", exc)
        return 4


if __name__ == "__main__":
    sys.exit(main())
