/**
 * Sphere trackball: drags rotate the camera around the target, keeping
 * the view direction and up vector unit length and orthogonal.
 */

import { Vec3 } from "./status.js";

function cross(a: Vec3, b: Vec3): Vec3 {
  return [
    a[1] * b[2] - a[2] * b[1],
    a[2] * b[0] - a[0] * b[2],
    a[0] * b[1] - a[1] * b[0],
  ];
}

function norm(a: Vec3): number {
  return Math.hypot(a[0], a[1], a[2]);
}

export function normalize(a: Vec3): Vec3 {
  const n = norm(a);
  if (n === 0) throw new Error("cannot normalize a zero vector");
  return [a[0] / n, a[1] / n, a[2] / n];
}

/** Rodrigues rotation of v around unit axis by angle (radians). */
export function rotateAround(v: Vec3, axis: Vec3, angle: number): Vec3 {
  const [x, y, z] = v;
  const [ux, uy, uz] = axis;
  const c = Math.cos(angle);
  const s = Math.sin(angle);
  const dot = ux * x + uy * y + uz * z;
  return [
    x * c + (uy * z - uz * y) * s + ux * dot * (1 - c),
    y * c + (uz * x - ux * z) * s + uy * dot * (1 - c),
    z * c + (ux * y - uy * x) * s + uz * dot * (1 - c),
  ];
}

export interface CameraPose {
  direction: Vec3;
  up: Vec3;
}

export class Trackball {
  direction: Vec3;
  up: Vec3;

  constructor(direction: Vec3, up: Vec3) {
    this.direction = normalize(direction);
    this.up = this.reproject(normalize(up));
  }

  private reproject(up: Vec3): Vec3 {
    const right = normalize(cross(this.direction, up));
    return normalize(cross(right, this.direction));
  }

  /**
   * Apply a drag in normalized screen units (positive dx drags right,
   * positive dy drags down); a full viewport width orbits pi radians.
   */
  drag(dx: number, dy: number): CameraPose {
    const yaw = -dx * Math.PI;
    const pitch = -dy * Math.PI;
    const right = normalize(cross(this.direction, this.up));
    let dir = rotateAround(this.direction, this.up, yaw);
    dir = rotateAround(dir, right, pitch);
    let up = rotateAround(this.up, right, pitch);
    this.direction = normalize(dir);
    this.up = this.reproject(normalize(up));
    return { direction: [...this.direction], up: [...this.up] };
  }

  /** Roll around the view axis (radians). */
  roll(angle: number): CameraPose {
    this.up = this.reproject(normalize(rotateAround(this.up, this.direction, angle)));
    return { direction: [...this.direction], up: [...this.up] };
  }
}
