import { describe, expect, it } from "vitest";

import { labeledPixelCount, rasterizeStrokes, strokeFootprint, Stroke } from "../src/mask.js";
import { BACKGROUND, FOREGROUND } from "../src/palette.js";

function dot(x: number, y: number, label: 1 | 2 = FOREGROUND, radius = 0): Stroke {
  return { label, radius, points: [{ x, y }] };
}

describe("strokeFootprint", () => {
  it("covers exactly the stamped pixel for a zero-radius dot", () => {
    expect(strokeFootprint(dot(3, 2), 10, 10)).toEqual([2 * 10 + 3]);
  });

  it("covers a disc for a positive radius", () => {
    const offsets = strokeFootprint(dot(5, 5, FOREGROUND, 2), 11, 11);
    // 13 pixels in the radius-2 disc around (5, 5)
    expect(offsets.length).toBe(13);
    expect(offsets).toContain(5 * 11 + 5);
    expect(offsets).toContain(3 * 11 + 5);
    expect(offsets).not.toContain(3 * 11 + 3); // corner, distance sqrt(8) > 2
  });

  it("rasterizes a straight segment continuously", () => {
    const stroke: Stroke = {
      label: FOREGROUND,
      radius: 0.5,
      points: [
        { x: 1, y: 4 },
        { x: 8, y: 4 },
      ],
    };
    const offsets = strokeFootprint(stroke, 10, 10);
    for (let x = 1; x <= 8; x++) expect(offsets).toContain(4 * 10 + x);
  });

  it("clips out-of-bounds points silently", () => {
    const offsets = strokeFootprint(dot(-5, -5, FOREGROUND, 1), 8, 8);
    expect(offsets).toEqual([]);
    const edge = strokeFootprint(dot(0, 0, FOREGROUND, 1), 8, 8);
    expect(edge).toContain(0);
    expect(edge.every((o) => o >= 0 && o < 64)).toBe(true);
  });

  it("is deterministic", () => {
    const stroke: Stroke = {
      label: BACKGROUND,
      radius: 2.5,
      points: [
        { x: 2.2, y: 3.7 },
        { x: 9.1, y: 8.4 },
      ],
    };
    expect(strokeFootprint(stroke, 16, 16)).toEqual(strokeFootprint(stroke, 16, 16));
  });
});

describe("rasterizeStrokes", () => {
  it("stamps the stroke label", () => {
    const mask = rasterizeStrokes([dot(1, 1, FOREGROUND, 1)], 5, 5);
    expect(mask[1 * 5 + 1]).toBe(FOREGROUND);
    expect(labeledPixelCount(mask)).toBe(strokeFootprint(dot(1, 1, FOREGROUND, 1), 5, 5).length);
  });

  it("later strokes overwrite earlier ones where they overlap", () => {
    const fg = dot(2, 2, FOREGROUND, 1);
    const bg = dot(2, 2, BACKGROUND, 0);
    const mask = rasterizeStrokes([fg, bg], 6, 6);
    expect(mask[2 * 6 + 2]).toBe(BACKGROUND); // overlap: last writer wins
    expect(mask[1 * 6 + 2]).toBe(FOREGROUND); // fg-only pixel survives
  });

  it("emits only codes 0, 1, 2", () => {
    const strokes: Stroke[] = [
      { label: FOREGROUND, radius: 2, points: [{ x: 3, y: 3 }, { x: 12, y: 9 }] },
      { label: BACKGROUND, radius: 1.5, points: [{ x: 10, y: 2 }, { x: 1, y: 13 }] },
    ];
    const mask = rasterizeStrokes(strokes, 16, 16);
    for (const v of mask) expect([0, 1, 2]).toContain(v);
  });
});
