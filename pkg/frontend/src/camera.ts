/** Minimal perspective camera: position/target/fov with point projection. */

export type Vec3 = [number, number, number];

export interface Camera {
  position: Vec3;
  target: Vec3;
  up: Vec3;
  fovY: number; // radians
}

function sub(a: Vec3, b: Vec3): Vec3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

function cross(a: Vec3, b: Vec3): Vec3 {
  return [
    a[1] * b[2] - a[2] * b[1],
    a[2] * b[0] - a[0] * b[2],
    a[0] * b[1] - a[1] * b[0],
  ];
}

function dot(a: Vec3, b: Vec3): number {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

function normalize(a: Vec3): Vec3 {
  const n = Math.hypot(a[0], a[1], a[2]) || 1;
  return [a[0] / n, a[1] / n, a[2] / n];
}

export function defaultCamera(dims: Vec3, spacing: number): Camera {
  const c: Vec3 = [
    (dims[0] - 1) * spacing * 0.5,
    (dims[1] - 1) * spacing * 0.5,
    (dims[2] - 1) * spacing * 0.5,
  ];
  const radius = Math.hypot(c[0], c[1], c[2]) * 2.2 + 1;
  return {
    position: [c[0] + radius * 0.55, c[1] - radius * 0.75, c[2] + radius * 0.45],
    target: c,
    up: [0, 0, 1],
    fovY: Math.PI / 4,
  };
}

export interface Projected {
  x: number;
  y: number;
  depth: number; // camera-space forward distance; <= 0 means behind
}

/** Project a world point to pixel coordinates for a given viewport. */
export function project(
  cam: Camera,
  p: Vec3,
  width: number,
  height: number,
): Projected {
  const forward = normalize(sub(cam.target, cam.position));
  const right = normalize(cross(forward, cam.up));
  const upv = cross(right, forward);
  const rel = sub(p, cam.position);
  const cx = dot(rel, right);
  const cy = dot(rel, upv);
  const cz = dot(rel, forward);
  const f = height / 2 / Math.tan(cam.fovY / 2);
  return {
    x: width / 2 + (f * cx) / cz,
    y: height / 2 - (f * cy) / cz,
    depth: cz,
  };
}

/** Orbit the camera around its target (azimuth about up, then elevation). */
export function orbit(cam: Camera, dAzimuth: number, dElevation: number): Camera {
  const rel = sub(cam.position, cam.target);
  const r = Math.hypot(rel[0], rel[1], rel[2]);
  let az = Math.atan2(rel[1], rel[0]) + dAzimuth;
  let el = Math.asin(rel[2] / r) + dElevation;
  el = Math.max(-1.45, Math.min(1.45, el));
  const position: Vec3 = [
    cam.target[0] + r * Math.cos(el) * Math.cos(az),
    cam.target[1] + r * Math.cos(el) * Math.sin(az),
    cam.target[2] + r * Math.sin(el),
  ];
  return { ...cam, position };
}

export function zoom(cam: Camera, factor: number): Camera {
  const rel = sub(cam.position, cam.target);
  return {
    ...cam,
    position: [
      cam.target[0] + rel[0] * factor,
      cam.target[1] + rel[1] * factor,
      cam.target[2] + rel[2] * factor,
    ],
  };
}
