/** Stroke rasterization onto a code mask.
 *
 * A stroke is a polyline stamped with a circular brush; the footprint is
 * every in-bounds pixel within `radius` of any segment (single points are
 * degenerate segments). Rasterization is deterministic integer/float math
 * so the same stroke always touches the same pixel set.
 */

import { Label } from "./palette.js";

export interface Point {
  x: number;
  y: number;
}

export interface Stroke {
  label: Label;
  radius: number;
  points: Point[];
}

/** Squared distance from pixel center p to segment ab. */
function distSqToSegment(px: number, py: number, a: Point, b: Point): number {
  const abx = b.x - a.x;
  const aby = b.y - a.y;
  const apx = px - a.x;
  const apy = py - a.y;
  const lenSq = abx * abx + aby * aby;
  let t = lenSq === 0 ? 0 : (apx * abx + apy * aby) / lenSq;
  t = Math.max(0, Math.min(1, t));
  const dx = px - (a.x + t * abx);
  const dy = py - (a.y + t * aby);
  return dx * dx + dy * dy;
}

/** All in-bounds pixels covered by the stroke, as y * width + x offsets. */
export function strokeFootprint(stroke: Stroke, width: number, height: number): number[] {
  const out = new Set<number>();
  const r = stroke.radius;
  const rSq = r * r;
  const pts = stroke.points;
  if (pts.length === 0) return [];
  const segments: Array<[Point, Point]> = [];
  if (pts.length === 1) {
    segments.push([pts[0], pts[0]]);
  } else {
    for (let i = 1; i < pts.length; i++) segments.push([pts[i - 1], pts[i]]);
  }
  for (const [a, b] of segments) {
    const x0 = Math.max(0, Math.floor(Math.min(a.x, b.x) - r));
    const x1 = Math.min(width - 1, Math.ceil(Math.max(a.x, b.x) + r));
    const y0 = Math.max(0, Math.floor(Math.min(a.y, b.y) - r));
    const y1 = Math.min(height - 1, Math.ceil(Math.max(a.y, b.y) + r));
    for (let y = y0; y <= y1; y++) {
      for (let x = x0; x <= x1; x++) {
        if (distSqToSegment(x, y, a, b) <= rSq) out.add(y * width + x);
      }
    }
  }
  return Array.from(out).sort((p, q) => p - q);
}

/** Render an ordered stroke list into a fresh code mask (last writer wins). */
export function rasterizeStrokes(strokes: Stroke[], width: number, height: number): Uint8Array {
  const mask = new Uint8Array(width * height);
  for (const stroke of strokes) {
    for (const offset of strokeFootprint(stroke, width, height)) {
      mask[offset] = stroke.label;
    }
  }
  return mask;
}

export function labeledPixelCount(mask: Uint8Array): number {
  let n = 0;
  for (let i = 0; i < mask.length; i++) if (mask[i] !== 0) n++;
  return n;
}
