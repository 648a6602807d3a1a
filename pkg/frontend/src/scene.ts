/**
 * View state and interactions: manifest loading, time slider, length
 * filtering, picking, and event display. Loaded frame data is never
 * mutated; all view state lives here.
 */

import { filterByLength, FrameStats, frameStats } from "./analytics";
import { FrameCache, FrameFetcher } from "./cache";
import { Camera, defaultCamera } from "./camera";
import { LineFrame, Manifest, parseManifest, VortexLine } from "./formats";
import { createFrameBuffer, FrameBuffer, pickAt, renderFrame } from "./render";

export interface LengthFilter {
  min: number;
  max: number;
}

export class Scene {
  manifest: Manifest;
  camera: Camera;
  currentFrame = 0;
  filter: LengthFilter = { min: 0, max: Infinity };
  selection: number | null = null;
  showEvents = true;
  lastError: string | null = null;

  private cache: FrameCache;
  private frame: LineFrame | null = null;
  private fb: FrameBuffer;
  private seekSeq = 0;

  private constructor(
    manifest: Manifest,
    fetcher: FrameFetcher,
    width: number,
    height: number,
  ) {
    this.manifest = manifest;
    this.cache = new FrameCache(manifest, fetcher);
    this.camera = defaultCamera(manifest.dims, manifest.spacing);
    this.fb = createFrameBuffer(width, height);
  }

  /** Parse a manifest and display frame 0. Throws FormatError on bad data. */
  static async load(
    manifestText: string,
    fetcher: FrameFetcher,
    width = 800,
    height = 600,
  ): Promise<Scene> {
    const manifest = parseManifest(manifestText);
    const scene = new Scene(manifest, fetcher, width, height);
    if (manifest.frameCount > 0) {
      await scene.setFrame(0);
    }
    return scene;
  }

  get frameBuffer(): FrameBuffer {
    return this.fb;
  }

  get loadedFrame(): LineFrame | null {
    return this.frame;
  }

  /** Lines passing the current length filter, in file order. */
  visibleLines(): VortexLine[] {
    if (!this.frame) return [];
    return filterByLength(this.frame.lines, this.filter.min, this.filter.max);
  }

  /** HUD stats for the displayed frame (all lines, unfiltered). */
  stats(): FrameStats | null {
    return this.frame ? frameStats(this.frame) : null;
  }

  setLengthFilter(min: number, max: number) {
    if (!(min < max)) {
      throw new RangeError("filter requires min < max");
    }
    this.filter = { min, max };
    if (this.selection !== null &&
        !this.visibleLines().some((ln) => ln.id === this.selection)) {
      this.selection = null; // filtered-out lines cannot stay selected
    }
    this.render();
  }

  /**
   * Seek the time slider. Resolves true when this request drew the frame,
   * false when a later seek superseded it (last write wins) or it failed.
   */
  async setFrame(index: number): Promise<boolean> {
    const seq = ++this.seekSeq;
    this.currentFrame = index;
    let frame: LineFrame | null;
    try {
      frame = await this.cache.seek(index);
    } catch (e) {
      if (seq === this.seekSeq) {
        this.lastError = `frame ${index}: ${e}`;
      }
      return false;
    }
    if (frame === null || seq !== this.seekSeq) {
      return false; // superseded while loading
    }
    this.frame = frame;
    this.lastError = null;
    this.render();
    return true;
  }

  setShowEvents(flag: boolean) {
    this.showEvents = flag;
    this.render();
  }

  setCamera(camera: Camera) {
    this.camera = camera;
    this.render();
  }

  /** Pick at pixel coordinates; updates and returns the selection. */
  pick(x: number, y: number): number | null {
    this.selection = pickAt(this.fb, x, y);
    this.render();
    return this.selection;
  }

  render() {
    if (!this.frame) return;
    renderFrame(this.fb, this.camera, this.frame, this.visibleLines(), {
      selection: this.selection,
      showEvents: this.showEvents,
    });
  }
}
