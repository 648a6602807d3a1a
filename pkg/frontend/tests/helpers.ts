import { readFile } from "node:fs/promises";
import { join } from "node:path";
import { FrameFetcher } from "../src/cache";

export const FIXTURES = join(__dirname, "fixtures");

export async function readFixture(...parts: string[]): Promise<Buffer> {
  return readFile(join(FIXTURES, ...parts));
}

export async function readFixtureText(...parts: string[]): Promise<string> {
  return (await readFixture(...parts)).toString("utf-8");
}

export function toArrayBuffer(buf: Buffer): ArrayBuffer {
  return buf.buffer.slice(buf.byteOffset, buf.byteOffset + buf.byteLength);
}

/** Fetcher serving frame files from a fixture bundle directory. */
export function bundleFetcher(bundle: string): FrameFetcher {
  return async (file) => toArrayBuffer(await readFixture(bundle, file));
}

export interface AnalyticsRow {
  frame: number;
  lines: number;
  total_length: number;
  events: number;
  error_metric: number;
}

export async function readAnalytics(bundle: string): Promise<AnalyticsRow[]> {
  return JSON.parse(await readFixtureText(bundle, "analytics.json"));
}
