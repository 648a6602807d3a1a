"""File formats: QVF1 volumetric field snapshots, QVL1 binary line frames,
canonical JSON line frames, frame manifests, and the analytics CSV.
All binary formats are little-endian.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ContractViolation, FormatError
from .field import Boundary, ComplexField3D
from .vectorize import ReconnectionEvent, VortexLine

QVF_MAGIC = b"QVF1"
QVL_MAGIC = b"QVL1"
QVF_HEADER = struct.Struct("<4sIIIIddBB6x")  # magic, version, nx, ny, nz, spacing, time, boundary, precision
MAX_DIM = 4096


@dataclass
class LineFileFrame:
    """One vectorized frame: domain info, lines, and reconnection events."""

    frame: int
    time: float
    dims: tuple
    spacing: float
    lines: list  # VortexLine
    events: list  # ReconnectionEvent


# ---------------------------------------------------------------------------
# QVF1 field snapshots


def write_field(path, field: ComplexField3D, precision: int = 8):
    """Write a QVF1 snapshot; precision 4 = f32 pairs, 8 = f64 pairs."""
    if precision not in (4, 8):
        raise FormatError("precision must be 4 or 8")
    nx, ny, nz = field.dims
    header = QVF_HEADER.pack(QVF_MAGIC, 1, nx, ny, nz, field.spacing,
                             field.time, field.boundary.value, precision)
    # x-fastest interleaved (re, im) pairs
    flat = field.values.transpose(2, 1, 0).ravel()
    pairs = np.empty(flat.size * 2, dtype=np.float64 if precision == 8 else np.float32)
    pairs[0::2] = flat.real
    pairs[1::2] = flat.imag
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(pairs.astype("<f8" if precision == 8 else "<f4").tobytes())


def read_field(path) -> ComplexField3D:
    with open(path, "rb") as fh:
        raw = fh.read(QVF_HEADER.size)
        if len(raw) < QVF_HEADER.size:
            raise FormatError("truncated QVF1 header")
        magic, version, nx, ny, nz, spacing, time, boundary, precision = \
            QVF_HEADER.unpack(raw)
        if magic != QVF_MAGIC:
            raise FormatError(f"bad magic {magic!r}")
        if version != 1:
            raise FormatError(f"unsupported QVF version {version}")
        if precision not in (4, 8):
            raise FormatError(f"bad precision {precision}")
        for n in (nx, ny, nz):
            if not 0 < n <= MAX_DIM:
                raise FormatError(f"dimension {n} out of range")
        count = nx * ny * nz * 2
        dtype = np.dtype("<f8" if precision == 8 else "<f4")
        raw_payload = fh.read(count * dtype.itemsize)
        if len(raw_payload) != count * dtype.itemsize:
            raise FormatError("truncated QVF1 payload")
        data = np.frombuffer(raw_payload, dtype=dtype)
    values = (data[0::2] + 1j * data[1::2]).astype(np.complex128)
    values = values.reshape(nz, ny, nx).transpose(2, 1, 0)
    return ComplexField3D(values, spacing, time, Boundary(boundary))


# ---------------------------------------------------------------------------
# QVL1 binary line frames


def write_lines_binary(path, frame: LineFileFrame):
    nx, ny, nz = frame.dims
    buf = bytearray()
    buf += struct.pack("<4sIIdIIId", QVL_MAGIC, 1, frame.frame, frame.time,
                       nx, ny, nz, frame.spacing)
    buf += struct.pack("<I", len(frame.lines))
    for ln in frame.lines:
        flags = (1 if ln.closed else 0) | (2 if ln.orientation else 0)
        buf += struct.pack("<IB", ln.id, flags)
        cp = np.asarray(ln.control_points, dtype="<f4")
        buf += struct.pack("<I", len(cp))
        buf += cp.tobytes()
        pl = np.asarray(ln.polyline, dtype="<f4")
        buf += struct.pack("<I", len(pl))
        buf += pl.tobytes()
        buf += struct.pack("<d", ln.length)
    buf += struct.pack("<I", len(frame.events))
    for ev in frame.events:
        buf += struct.pack("<IH", ev.id, ev.degree)
        buf += np.asarray(ev.position, dtype="<f4").tobytes()
    Path(path).write_bytes(bytes(buf))


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.off = 0

    def unpack(self, fmt):
        s = struct.Struct(fmt)
        if self.off + s.size > len(self.data):
            raise FormatError("truncated QVL1 record")
        out = s.unpack_from(self.data, self.off)
        self.off += s.size
        return out

    def floats(self, count):
        nbytes = count * 4
        if self.off + nbytes > len(self.data):
            raise FormatError("truncated QVL1 float block")
        arr = np.frombuffer(self.data, dtype="<f4", count=count, offset=self.off)
        self.off += nbytes
        return arr.astype(np.float64)


def read_lines_binary(path) -> LineFileFrame:
    rd = _Reader(Path(path).read_bytes())
    magic, version, frame_no, time, nx, ny, nz, spacing = rd.unpack("<4sIIdIIId")
    if magic != QVL_MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != 1:
        raise FormatError(f"unsupported QVL version {version}")
    (n_lines,) = rd.unpack("<I")
    lines = []
    for _ in range(n_lines):
        line_id, flags = rd.unpack("<IB")
        (nc,) = rd.unpack("<I")
        cp = rd.floats(nc * 3).reshape(nc, 3)
        (npl,) = rd.unpack("<I")
        pl = rd.floats(npl * 3).reshape(npl, 3)
        (length,) = rd.unpack("<d")
        lines.append(VortexLine(id=line_id, closed=bool(flags & 1),
                                control_points=cp, polyline=pl,
                                orientation=1 if flags & 2 else 0,
                                length=length))
    (n_events,) = rd.unpack("<I")
    events = []
    for _ in range(n_events):
        ev_id, degree = rd.unpack("<IH")
        pos = rd.floats(3)
        events.append(ReconnectionEvent(id=ev_id, position=pos, degree=degree))
    return LineFileFrame(frame=frame_no, time=time, dims=(nx, ny, nz),
                         spacing=spacing, lines=lines, events=events)


# ---------------------------------------------------------------------------
# JSON line frames (canonical: fixed key order, repr-shortest floats)


def frame_to_json_dict(frame: LineFileFrame) -> dict:
    return {
        "frame": frame.frame,
        "time": frame.time,
        "dims": list(frame.dims),
        "spacing": frame.spacing,
        "lines": [
            {
                "id": ln.id,
                "closed": ln.closed,
                "oriented": bool(ln.orientation),
                "control_points": [[float(c) for c in p] for p in ln.control_points],
                "polyline": [[float(c) for c in p] for p in ln.polyline],
                "length": ln.length,
                "branch_endpoints": list(ln.branch_endpoints),
            }
            for ln in frame.lines
        ],
        "events": [
            {
                "id": ev.id,
                "degree": ev.degree,
                "position": [float(c) for c in ev.position],
                "frame": ev.frame,
            }
            for ev in frame.events
        ],
    }


def write_lines_json(path, frame: LineFileFrame):
    Path(path).write_text(json.dumps(frame_to_json_dict(frame)) + "\n")


def read_lines_json(path) -> LineFileFrame:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"bad JSON frame: {exc}")
    try:
        lines = [
            VortexLine(id=ld["id"], closed=ld["closed"],
                       control_points=np.array(ld["control_points"], dtype=np.float64).reshape(-1, 3),
                       polyline=np.array(ld["polyline"], dtype=np.float64).reshape(-1, 3),
                       orientation=1 if ld["oriented"] else 0,
                       length=ld["length"],
                       branch_endpoints=tuple(ld.get("branch_endpoints", ())))
            for ld in d["lines"]
        ]
        events = [
            ReconnectionEvent(id=ed["id"], position=np.array(ed["position"]),
                              degree=ed["degree"], frame=ed.get("frame", d["frame"]))
            for ed in d["events"]
        ]
        return LineFileFrame(frame=d["frame"], time=d["time"], dims=tuple(d["dims"]),
                             spacing=d["spacing"], lines=lines, events=events)
    except KeyError as exc:
        raise FormatError(f"missing field in JSON frame: {exc}")


# ---------------------------------------------------------------------------
# manifest and CSV


def write_manifest(path, frames, dims, spacing, file_pattern="frame_%06d.qvl"):
    """Manifest indexing a frame sequence for the viewer's time slider."""
    d = {
        "frame_count": len(frames),
        "dims": list(dims),
        "spacing": spacing,
        "times": [f.time for f in frames],
        "files": [file_pattern % f.frame for f in frames],
        "json_files": [(file_pattern % f.frame).replace(".qvl", ".json")
                       for f in frames],
        "frames": [f.frame for f in frames],
    }
    Path(path).write_text(json.dumps(d, indent=1) + "\n")


CSV_HEADER = "frame,lines,total_length,events,error_metric"


def write_analytics_csv(path, analytics):
    rows = [CSV_HEADER]
    for a in analytics:
        rows.append(f"{a.frame},{a.line_count},{a.total_length!r},"
                    f"{a.event_count},{a.error_metric!r}")
    Path(path).write_text("\n".join(rows) + "\n")


def write_analytics_json(path, analytics):
    out = [
        {
            "frame": a.frame,
            "lines": a.line_count,
            "total_length": a.total_length,
            "events": a.event_count,
            "error_metric": a.error_metric,
            "length_histogram": [
                {"lo": lo, "hi": hi, "count": c}
                for (lo, hi), c in a.length_histogram
            ],
        }
        for a in analytics
    ]
    Path(path).write_text(json.dumps(out) + "\n")
