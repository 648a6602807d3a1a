/**
 * Parsers for the exported data formats: QVL1 binary line frames, the JSON
 * frame mirror, and the bundle manifest. All binary data is little-endian.
 */

export interface VortexLine {
  id: number;
  closed: boolean;
  oriented: boolean;
  controlPoints: Float32Array; // flat xyz triples
  polyline: Float32Array; // flat xyz triples
  length: number;
  branchEndpoints: number[];
}

export interface ReconnectionEvent {
  id: number;
  degree: number;
  position: [number, number, number];
  frame: number;
}

export interface LineFrame {
  frame: number;
  time: number;
  dims: [number, number, number];
  spacing: number;
  lines: VortexLine[];
  events: ReconnectionEvent[];
}

export interface Manifest {
  frameCount: number;
  dims: [number, number, number];
  spacing: number;
  times: number[];
  files: string[];
  jsonFiles: string[];
  frames: number[];
}

export class FormatError extends Error {}

const QVL_MAGIC = 0x314c5651; // "QVL1" read as little-endian u32

class Cursor {
  off = 0;
  view: DataView;
  constructor(buf: ArrayBuffer) {
    this.view = new DataView(buf);
  }
  private need(n: number) {
    if (this.off + n > this.view.byteLength) {
      throw new FormatError("truncated QVL1 data");
    }
  }
  u8(): number {
    this.need(1);
    return this.view.getUint8(this.off++);
  }
  u16(): number {
    this.need(2);
    const v = this.view.getUint16(this.off, true);
    this.off += 2;
    return v;
  }
  u32(): number {
    this.need(4);
    const v = this.view.getUint32(this.off, true);
    this.off += 4;
    return v;
  }
  f64(): number {
    this.need(8);
    const v = this.view.getFloat64(this.off, true);
    this.off += 8;
    return v;
  }
  f32Array(count: number): Float32Array {
    this.need(count * 4);
    // copy so the frame owns its data independent of the transfer buffer
    const out = new Float32Array(count);
    for (let i = 0; i < count; i++) {
      out[i] = this.view.getFloat32(this.off + 4 * i, true);
    }
    this.off += count * 4;
    return out;
  }
}

export function parseLinesBinary(buf: ArrayBuffer): LineFrame {
  const c = new Cursor(buf);
  const magic = c.u32();
  if (magic !== QVL_MAGIC) {
    throw new FormatError(`bad magic 0x${magic.toString(16)}`);
  }
  const version = c.u32();
  if (version !== 1) {
    throw new FormatError(`unsupported version ${version}`);
  }
  const frame = c.u32();
  const time = c.f64();
  const dims: [number, number, number] = [c.u32(), c.u32(), c.u32()];
  const spacing = c.f64();
  const nLines = c.u32();
  const lines: VortexLine[] = [];
  for (let i = 0; i < nLines; i++) {
    const id = c.u32();
    const flags = c.u8();
    const nc = c.u32();
    const controlPoints = c.f32Array(nc * 3);
    const np = c.u32();
    const polyline = c.f32Array(np * 3);
    const length = c.f64();
    lines.push({
      id,
      closed: (flags & 1) !== 0,
      oriented: (flags & 2) !== 0,
      controlPoints,
      polyline,
      length,
      branchEndpoints: [],
    });
  }
  const nEvents = c.u32();
  const events: ReconnectionEvent[] = [];
  for (let i = 0; i < nEvents; i++) {
    const id = c.u32();
    const degree = c.u16();
    const p = c.f32Array(3);
    events.push({ id, degree, position: [p[0], p[1], p[2]], frame });
  }
  return { frame, time, dims, spacing, lines, events };
}

function asNumber(v: unknown, what: string): number {
  if (typeof v !== "number" || !Number.isFinite(v)) {
    throw new FormatError(`${what} is not a finite number`);
  }
  return v;
}

function asTriples(v: unknown, what: string): Float32Array {
  if (!Array.isArray(v)) {
    throw new FormatError(`${what} is not an array`);
  }
  const out = new Float32Array(v.length * 3);
  v.forEach((p, i) => {
    if (!Array.isArray(p) || p.length !== 3) {
      throw new FormatError(`${what}[${i}] is not an xyz triple`);
    }
    out[3 * i] = p[0];
    out[3 * i + 1] = p[1];
    out[3 * i + 2] = p[2];
  });
  return out;
}

export function parseLinesJson(text: string): LineFrame {
  let d: any;
  try {
    d = JSON.parse(text);
  } catch (e) {
    throw new FormatError(`bad JSON frame: ${e}`);
  }
  if (!d || !Array.isArray(d.lines) || !Array.isArray(d.events)) {
    throw new FormatError("JSON frame missing lines/events");
  }
  const frame = asNumber(d.frame, "frame");
  const lines: VortexLine[] = d.lines.map((ld: any) => ({
    id: asNumber(ld.id, "line id"),
    closed: !!ld.closed,
    oriented: !!ld.oriented,
    controlPoints: asTriples(ld.control_points, "control_points"),
    polyline: asTriples(ld.polyline, "polyline"),
    length: asNumber(ld.length, "length"),
    branchEndpoints: Array.isArray(ld.branch_endpoints) ? ld.branch_endpoints : [],
  }));
  const events: ReconnectionEvent[] = d.events.map((ed: any) => ({
    id: asNumber(ed.id, "event id"),
    degree: asNumber(ed.degree, "degree"),
    position: [ed.position[0], ed.position[1], ed.position[2]] as [
      number,
      number,
      number,
    ],
    frame: typeof ed.frame === "number" ? ed.frame : frame,
  }));
  return {
    frame,
    time: asNumber(d.time, "time"),
    dims: [d.dims[0], d.dims[1], d.dims[2]],
    spacing: asNumber(d.spacing, "spacing"),
    lines,
    events,
  };
}

export function parseManifest(text: string): Manifest {
  let d: any;
  try {
    d = JSON.parse(text);
  } catch (e) {
    throw new FormatError(`bad manifest: ${e}`);
  }
  if (
    !d ||
    typeof d.frame_count !== "number" ||
    !Array.isArray(d.files) ||
    !Array.isArray(d.times)
  ) {
    throw new FormatError("manifest missing frame_count/files/times");
  }
  if (d.files.length !== d.frame_count || d.times.length !== d.frame_count) {
    throw new FormatError("manifest lengths disagree with frame_count");
  }
  return {
    frameCount: d.frame_count,
    dims: [d.dims[0], d.dims[1], d.dims[2]],
    spacing: d.spacing,
    times: d.times,
    files: d.files,
    jsonFiles: Array.isArray(d.json_files) ? d.json_files : [],
    frames: Array.isArray(d.frames) ? d.frames : d.files.map((_: string, i: number) => i),
  };
}
