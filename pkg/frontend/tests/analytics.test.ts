import { describe, expect, it } from "vitest";
import { filterByLength, frameStats } from "../src/analytics";
import { parseLinesBinary, VortexLine } from "../src/formats";
import { readAnalytics, readFixture, toArrayBuffer } from "./helpers";

function fakeLine(id: number, length: number): VortexLine {
  return {
    id,
    closed: false,
    oriented: true,
    controlPoints: new Float32Array(0),
    polyline: new Float32Array(0),
    length,
    branchEndpoints: [],
  };
}

describe("filterByLength", () => {
  const lines = [fakeLine(0, 1.0), fakeLine(1, 5.0), fakeLine(2, 10.0)];

  it("keeps lines with lo <= length < hi", () => {
    expect(filterByLength(lines, 0, Infinity).map((l) => l.id)).toEqual([
      0, 1, 2,
    ]);
    expect(filterByLength(lines, 5.0, 10.0).map((l) => l.id)).toEqual([1]);
    // half-open: the upper bound itself is excluded, the lower included
    expect(filterByLength(lines, 1.0, 5.0).map((l) => l.id)).toEqual([0]);
  });

  it("returns nothing for a range no line falls in", () => {
    expect(filterByLength(lines, 100, 200)).toEqual([]);
  });

  it("rejects empty or inverted ranges", () => {
    expect(() => filterByLength(lines, 5, 5)).toThrow(RangeError);
    expect(() => filterByLength(lines, 9, 2)).toThrow(RangeError);
  });
});

describe("frameStats", () => {
  it("matches the exporter analytics for every frame of the bundle", async () => {
    const rows = await readAnalytics("seq");
    for (let i = 0; i < rows.length; i++) {
      const frame = parseLinesBinary(
        toArrayBuffer(await readFixture("seq", `frame_${String(i).padStart(6, "0")}.qvl`)),
      );
      const stats = frameStats(frame);
      expect(stats.frame).toBe(rows[i].frame);
      expect(stats.lineCount).toBe(rows[i].lines);
      expect(stats.eventCount).toBe(rows[i].events);
      expect(stats.totalLength).toBeCloseTo(rows[i].total_length, 9);
    }
  });
});
