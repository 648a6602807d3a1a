/**
 * Bounded frame cache with prefetch around the current frame and
 * last-write-wins sequencing for rapid scrubbing.
 */

import { LineFrame, Manifest, parseLinesBinary } from "./formats";

/** Fetches one frame file by name; injected so tests can serve from memory. */
export type FrameFetcher = (file: string) => Promise<ArrayBuffer>;

export const DEFAULT_CACHE_WINDOW = 8;

/**
 * The half-open index window of cached frames around `current`: `size`
 * consecutive frames biased one extra frame backward, clamped to the
 * sequence bounds.
 */
export function cacheWindow(
  current: number,
  frameCount: number,
  size: number = DEFAULT_CACHE_WINDOW,
): [number, number] {
  const span = Math.min(size, frameCount);
  let start = current - Math.ceil(span / 2);
  start = Math.max(0, Math.min(start, frameCount - span));
  return [start, start + span];
}

export class FrameCache {
  private frames = new Map<number, LineFrame>();
  private pending = new Map<number, Promise<LineFrame>>();
  private requestSeq = 0;

  constructor(
    private manifest: Manifest,
    private fetcher: FrameFetcher,
    private windowSize: number = DEFAULT_CACHE_WINDOW,
  ) {}

  has(index: number): boolean {
    return this.frames.has(index);
  }

  cachedIndices(): number[] {
    return [...this.frames.keys()].sort((a, b) => a - b);
  }

  private checkIndex(index: number) {
    if (index < 0 || index >= this.manifest.frameCount) {
      throw new RangeError(`frame ${index} outside manifest`);
    }
  }

  private load(index: number): Promise<LineFrame> {
    const cached = this.frames.get(index);
    if (cached) return Promise.resolve(cached);
    let p = this.pending.get(index);
    if (!p) {
      p = this.fetcher(this.manifest.files[index])
        .then((buf) => {
          const frame = parseLinesBinary(buf);
          this.frames.set(index, frame);
          return frame;
        })
        .finally(() => this.pending.delete(index));
      this.pending.set(index, p);
    }
    return p;
  }

  private evictOutside(window: [number, number]) {
    for (const k of this.frames.keys()) {
      if (k < window[0] || k >= window[1]) {
        this.frames.delete(k);
      }
    }
  }

  /**
   * Resolve the frame at `index`, prefetch its window, and evict frames
   * that fell out of it. If a newer seek supersedes this one before its
   * data arrives, resolves to null (the caller must drop it).
   */
  async seek(index: number): Promise<LineFrame | null> {
    this.checkIndex(index);
    const seq = ++this.requestSeq;
    const window = cacheWindow(index, this.manifest.frameCount, this.windowSize);
    const frame = await this.load(index);
    if (seq !== this.requestSeq) {
      return null; // a later seek won
    }
    this.evictOutside(window);
    for (let i = window[0]; i < window[1]; i++) {
      if (!this.frames.has(i) && !this.pending.has(i)) {
        this.load(i).catch(() => undefined); // prefetch; surfaced on demand
      }
    }
    return frame;
  }
}
