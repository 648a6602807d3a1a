/**
 * Software line renderer with an id buffer for picking.
 *
 * Lines are drawn as screen-space thick polylines with per-vertex color
 * encoding world position and tangent direction. Alongside the RGBA color
 * buffer, every covered pixel stores the line id (off-screen id pass), so
 * picking is an O(1) buffer read and works identically headless and in the
 * browser (the color buffer is blitted to a canvas via ImageData).
 */

import { Camera, Vec3, project } from "./camera";
import { LineFrame, ReconnectionEvent, VortexLine } from "./formats";

export const NO_PICK = -1;
export const EVENT_PICK_BASE = 1 << 24; // ids above this are event markers

export interface FrameBuffer {
  width: number;
  height: number;
  color: Uint8ClampedArray; // RGBA
  idBuf: Int32Array; // line id per pixel, NO_PICK where empty
  depth: Float32Array;
}

export function createFrameBuffer(width: number, height: number): FrameBuffer {
  return {
    width,
    height,
    color: new Uint8ClampedArray(width * height * 4),
    idBuf: new Int32Array(width * height).fill(NO_PICK),
    depth: new Float32Array(width * height).fill(Infinity),
  };
}

export function clear(fb: FrameBuffer, r = 16, g = 18, b = 24) {
  for (let i = 0; i < fb.width * fb.height; i++) {
    fb.color[4 * i] = r;
    fb.color[4 * i + 1] = g;
    fb.color[4 * i + 2] = b;
    fb.color[4 * i + 3] = 255;
    fb.idBuf[i] = NO_PICK;
    fb.depth[i] = Infinity;
  }
}

function putPixel(
  fb: FrameBuffer,
  x: number,
  y: number,
  depth: number,
  rgb: [number, number, number],
  id: number,
) {
  if (x < 0 || y < 0 || x >= fb.width || y >= fb.height) return;
  const i = y * fb.width + x;
  if (depth >= fb.depth[i]) return;
  fb.depth[i] = depth;
  fb.idBuf[i] = id;
  fb.color[4 * i] = rgb[0];
  fb.color[4 * i + 1] = rgb[1];
  fb.color[4 * i + 2] = rgb[2];
  fb.color[4 * i + 3] = 255;
}

function drawDisc(
  fb: FrameBuffer,
  cx: number,
  cy: number,
  radius: number,
  depth: number,
  rgb: [number, number, number],
  id: number,
) {
  const r = Math.max(1, radius);
  const r2 = r * r;
  for (let y = Math.floor(cy - r); y <= Math.ceil(cy + r); y++) {
    for (let x = Math.floor(cx - r); x <= Math.ceil(cx + r); x++) {
      const dx = x - cx;
      const dy = y - cy;
      if (dx * dx + dy * dy <= r2) {
        putPixel(fb, x, y, depth, rgb, id);
      }
    }
  }
}

function drawThickSegment(
  fb: FrameBuffer,
  a: { x: number; y: number; depth: number },
  b: { x: number; y: number; depth: number },
  halfWidth: number,
  rgbA: [number, number, number],
  rgbB: [number, number, number],
  id: number,
) {
  if (a.depth <= 0 || b.depth <= 0) return; // behind the camera
  const steps = Math.max(1, Math.ceil(Math.hypot(b.x - a.x, b.y - a.y)));
  for (let s = 0; s <= steps; s++) {
    const t = s / steps;
    const rgb: [number, number, number] = [
      rgbA[0] + t * (rgbB[0] - rgbA[0]),
      rgbA[1] + t * (rgbB[1] - rgbA[1]),
      rgbA[2] + t * (rgbB[2] - rgbA[2]),
    ];
    drawDisc(
      fb,
      a.x + t * (b.x - a.x),
      a.y + t * (b.y - a.y),
      halfWidth,
      a.depth + t * (b.depth - a.depth),
      rgb,
      id,
    );
  }
}

/** Color from world position (RGB from xyz) blended with tangent direction. */
export function vertexColor(
  p: Vec3,
  tangent: Vec3,
  extent: Vec3,
  highlight: boolean,
): [number, number, number] {
  const tn = Math.hypot(tangent[0], tangent[1], tangent[2]) || 1;
  const mix = (pos: number, ext: number, t: number) => {
    const byPos = 55 + 160 * Math.min(1, Math.max(0, pos / (ext || 1)));
    const byTan = 127 + 128 * (t / tn);
    return 0.6 * byPos + 0.4 * byTan;
  };
  const rgb: [number, number, number] = [
    mix(p[0], extent[0], tangent[0]),
    mix(p[1], extent[1], tangent[1]),
    mix(p[2], extent[2], tangent[2]),
  ];
  if (highlight) {
    // higher intensity toward warm white for the selected line
    return [
      Math.min(255, rgb[0] * 0.4 + 200),
      Math.min(255, rgb[1] * 0.4 + 170),
      Math.min(255, rgb[2] * 0.4 + 90),
    ];
  }
  return rgb;
}

export interface RenderOptions {
  lineHalfWidth?: number;
  selection?: number | null;
  showEvents?: boolean;
  eventRadius?: number;
}

export function renderLine(
  fb: FrameBuffer,
  cam: Camera,
  line: VortexLine,
  extent: Vec3,
  halfWidth: number,
  highlight: boolean,
) {
  const pts = line.polyline;
  const n = pts.length / 3;
  if (n < 2) return;
  const at = (i: number): Vec3 => [pts[3 * i], pts[3 * i + 1], pts[3 * i + 2]];
  const segs = line.closed ? n : n - 1;
  for (let i = 0; i < segs; i++) {
    const p0 = at(i);
    const p1 = at((i + 1) % n);
    const tangent: Vec3 = [p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2]];
    const a = project(cam, p0, fb.width, fb.height);
    const b = project(cam, p1, fb.width, fb.height);
    drawThickSegment(
      fb,
      a,
      b,
      highlight ? halfWidth + 1 : halfWidth,
      vertexColor(p0, tangent, extent, highlight),
      vertexColor(p1, tangent, extent, highlight),
      line.id,
    );
  }
}

export function renderEvent(
  fb: FrameBuffer,
  cam: Camera,
  ev: ReconnectionEvent,
  radius: number,
) {
  const p = project(cam, ev.position, fb.width, fb.height);
  if (p.depth <= 0) return;
  drawDisc(fb, p.x, p.y, radius, p.depth - 1e-6, [250, 80, 80], EVENT_PICK_BASE + ev.id);
}

export function renderFrame(
  fb: FrameBuffer,
  cam: Camera,
  frame: LineFrame,
  visible: VortexLine[],
  opts: RenderOptions = {},
) {
  clear(fb);
  const extent: Vec3 = [
    (frame.dims[0] - 1) * frame.spacing,
    (frame.dims[1] - 1) * frame.spacing,
    (frame.dims[2] - 1) * frame.spacing,
  ];
  const halfWidth = opts.lineHalfWidth ?? 2;
  for (const line of visible) {
    renderLine(fb, cam, line, extent, halfWidth, line.id === opts.selection);
  }
  if (opts.showEvents) {
    for (const ev of frame.events) {
      renderEvent(fb, cam, ev, opts.eventRadius ?? 4);
    }
  }
}

/** Decoded line id at a pixel, or null for background/event markers. */
export function pickAt(fb: FrameBuffer, x: number, y: number): number | null {
  const xi = Math.round(x);
  const yi = Math.round(y);
  if (xi < 0 || yi < 0 || xi >= fb.width || yi >= fb.height) return null;
  const id = fb.idBuf[yi * fb.width + xi];
  return id === NO_PICK || id >= EVENT_PICK_BASE ? null : id;
}
