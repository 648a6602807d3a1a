/**
 * Frame statistics mirroring the exporter's analytics: the HUD shows the
 * same line counts, total lengths, and event counts the CLI reports.
 */

import { LineFrame, VortexLine } from "./formats";

/** Lines with lo <= length < hi, order preserved. */
export function filterByLength(
  lines: VortexLine[],
  lo: number,
  hi: number,
): VortexLine[] {
  if (!(lo < hi)) {
    throw new RangeError("filter range requires lo < hi");
  }
  return lines.filter((ln) => lo <= ln.length && ln.length < hi);
}

export interface FrameStats {
  frame: number;
  lineCount: number;
  totalLength: number;
  eventCount: number;
}

/** Compensated (Kahan) sum so long frames match the exporter's totals. */
function compensatedSum(values: number[]): number {
  let sum = 0;
  let c = 0;
  for (const v of values) {
    const y = v - c;
    const t = sum + y;
    c = t - sum - y;
    sum = t;
  }
  return sum;
}

export function frameStats(frame: LineFrame): FrameStats {
  return {
    frame: frame.frame,
    lineCount: frame.lines.length,
    totalLength: compensatedSum(frame.lines.map((ln) => ln.length)),
    eventCount: frame.events.length,
  };
}
