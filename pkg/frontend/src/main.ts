/**
 * Browser entry point. Loads a bundle (manifest.json + QVL1 frames) over
 * HTTP, blits the software renderer's color buffer to a canvas, and wires
 * the time slider, length filter, event toggle, picking, and orbit/zoom.
 */

import { orbit, zoom } from "./camera";
import { Scene } from "./scene";

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

async function fetchFrame(base: string, file: string): Promise<ArrayBuffer> {
  const res = await fetch(`${base}/${file}`);
  if (!res.ok) throw new Error(`${file}: HTTP ${res.status}`);
  return res.arrayBuffer();
}

function blit(scene: Scene, ctx: CanvasRenderingContext2D) {
  const fb = scene.frameBuffer;
  const img = ctx.createImageData(fb.width, fb.height);
  img.data.set(fb.color);
  ctx.putImageData(img, 0, 0);
}

function updateHud(scene: Scene) {
  const stats = scene.stats();
  if (!stats) return;
  const time = scene.manifest.times[scene.currentFrame];
  $("hud").textContent = [
    `frame ${stats.frame}  t=${time.toFixed(4)}`,
    `lines ${stats.lineCount} (${scene.visibleLines().length} shown)`,
    `total length ${stats.totalLength.toFixed(3)}`,
    `events ${stats.eventCount}`,
    scene.selection !== null ? `selected line ${scene.selection}` : "",
    scene.lastError ? `error: ${scene.lastError}` : "",
  ]
    .filter(Boolean)
    .join("\n");
}

async function start() {
  const params = new URLSearchParams(location.search);
  const base = params.get("bundle") ?? "data";
  const canvas = $("view") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d");
  if (!ctx) throw new Error("2d canvas unavailable");

  let scene: Scene;
  try {
    const res = await fetch(`${base}/manifest.json`);
    if (!res.ok) throw new Error(`manifest.json: HTTP ${res.status}`);
    scene = await Scene.load(
      await res.text(),
      (file) => fetchFrame(base, file),
      canvas.width,
      canvas.height,
    );
  } catch (e) {
    $("hud").textContent = `failed to load bundle "${base}": ${e}`;
    return;
  }

  const slider = $("frame") as HTMLInputElement;
  slider.max = String(Math.max(0, scene.manifest.frameCount - 1));
  const refresh = () => {
    blit(scene, ctx);
    updateHud(scene);
  };

  slider.addEventListener("input", () => {
    // last write wins: a stale response resolves false and is not drawn
    scene.setFrame(Number(slider.value)).then((drawn) => drawn && refresh());
  });

  const applyFilter = () => {
    const lo = Number((($("fmin") as HTMLInputElement).value || "0"));
    const hiRaw = ($("fmax") as HTMLInputElement).value;
    const hi = hiRaw === "" ? Infinity : Number(hiRaw);
    try {
      scene.setLengthFilter(lo, hi);
      refresh();
    } catch (e) {
      $("hud").textContent = `bad filter: ${e}`;
    }
  };
  $("fmin").addEventListener("change", applyFilter);
  $("fmax").addEventListener("change", applyFilter);

  ($("events") as HTMLInputElement).addEventListener("change", (ev) => {
    scene.setShowEvents((ev.target as HTMLInputElement).checked);
    refresh();
  });

  canvas.addEventListener("click", (ev) => {
    const r = canvas.getBoundingClientRect();
    scene.pick(ev.clientX - r.left, ev.clientY - r.top);
    refresh();
  });

  let dragging = false;
  canvas.addEventListener("mousedown", () => (dragging = true));
  window.addEventListener("mouseup", () => (dragging = false));
  canvas.addEventListener("mousemove", (ev) => {
    if (!dragging) return;
    scene.setCamera(orbit(scene.camera, -ev.movementX * 0.01, ev.movementY * 0.01));
    refresh();
  });
  canvas.addEventListener("wheel", (ev) => {
    ev.preventDefault();
    scene.setCamera(zoom(scene.camera, ev.deltaY > 0 ? 1.1 : 1 / 1.1));
    refresh();
  });

  refresh();
}

start();
