import { describe, expect, it } from "vitest";
import { cacheWindow, FrameCache } from "../src/cache";
import { parseManifest } from "../src/formats";
import { bundleFetcher, readFixtureText } from "./helpers";

describe("cacheWindow", () => {
  it("keeps frames 33-40 when seeking frame 37 of 100", () => {
    const [lo, hi] = cacheWindow(37, 100);
    expect(lo).toBe(33);
    expect(hi).toBe(41); // half-open, so frames 33..40 inclusive
    expect(hi - lo).toBe(8);
  });

  it("clamps at both ends of the sequence", () => {
    expect(cacheWindow(0, 100)).toEqual([0, 8]);
    expect(cacheWindow(1, 100)).toEqual([0, 8]);
    expect(cacheWindow(99, 100)).toEqual([92, 100]);
    expect(cacheWindow(97, 100)).toEqual([92, 100]);
  });

  it("shrinks to the sequence when it is shorter than the window", () => {
    expect(cacheWindow(2, 5)).toEqual([0, 5]);
    expect(cacheWindow(0, 1)).toEqual([0, 1]);
  });

  it("always contains the current frame", () => {
    for (let count = 1; count < 30; count++) {
      for (let i = 0; i < count; i++) {
        const [lo, hi] = cacheWindow(i, count);
        expect(lo).toBeLessThanOrEqual(i);
        expect(hi).toBeGreaterThan(i);
        expect(lo).toBeGreaterThanOrEqual(0);
        expect(hi).toBeLessThanOrEqual(count);
      }
    }
  });
});

async function seqCache(windowSize?: number) {
  const manifest = parseManifest(await readFixtureText("seq", "manifest.json"));
  return new FrameCache(manifest, bundleFetcher("seq"), windowSize);
}

describe("FrameCache", () => {
  it("resolves the requested frame and prefetches its window", async () => {
    const cache = await seqCache();
    const frame = await cache.seek(2);
    expect(frame?.frame).toBe(2);
    // allow the prefetch promises to settle
    await new Promise((r) => setTimeout(r, 20));
    expect(cache.cachedIndices()).toEqual([0, 1, 2, 3, 4]);
  });

  it("evicts frames that leave the window", async () => {
    const cache = await seqCache(2);
    await cache.seek(0);
    await new Promise((r) => setTimeout(r, 20));
    expect(cache.cachedIndices()).toEqual([0, 1]);
    await cache.seek(4);
    await new Promise((r) => setTimeout(r, 20));
    expect(cache.cachedIndices()).toEqual([3, 4]);
    expect(cache.has(0)).toBe(false);
  });

  it("rejects out-of-range frames", async () => {
    const cache = await seqCache();
    await expect(cache.seek(-1)).rejects.toThrow(RangeError);
    await expect(cache.seek(5)).rejects.toThrow(RangeError);
  });

  it("drops superseded seeks so the last request wins", async () => {
    const manifest = parseManifest(
      await readFixtureText("seq", "manifest.json"),
    );
    const base = bundleFetcher("seq");
    // delay frame 1 so the later seek to frame 3 overtakes it
    const gate: { release?: () => void } = {};
    const slowFirst: typeof base = (file) =>
      file === "frame_000001.qvl"
        ? new Promise((resolve) => {
            gate.release = () => resolve(base(file));
          })
        : base(file);
    const cache = new FrameCache(manifest, slowFirst);
    const stale = cache.seek(1);
    const fresh = await cache.seek(3);
    expect(fresh?.frame).toBe(3);
    gate.release!();
    expect(await stale).toBeNull();
  });
});
