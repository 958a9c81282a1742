/** Browser entry point: wires the session to a canvas and the local API.
 *
 * Shortcuts: f foreground brush, b background brush, z undo, y redo,
 * n next image, p previous image, e export, [ ] brush size.
 */

import { rasterizeStrokes, Point, Stroke } from "./mask.js";
import { BACKGROUND, FOREGROUND, Label, OVERLAY_COLORS } from "./palette.js";
import { AnnotationSession, ExportBlockedError, Task } from "./session.js";

interface TaskListing {
  images: { id: string; file: string }[];
  categories: string[];
}

class AnnotatorApp {
  private session!: AnnotationSession;
  private canvas: HTMLCanvasElement;
  private status: HTMLElement;
  private tagBox: HTMLElement;
  private image = new Image();
  private label: Label = FOREGROUND;
  private radius = 3;
  private drawing: Point[] | null = null;
  private shownAt = performance.now();

  constructor() {
    this.canvas = document.getElementById("canvas") as HTMLCanvasElement;
    this.status = document.getElementById("status")!;
    this.tagBox = document.getElementById("tags")!;
  }

  async start(): Promise<void> {
    const resp = await fetch("/api/tasks");
    const listing = (await resp.json()) as TaskListing;
    if (!listing.images.length) {
      this.status.textContent = "error: the served directory contains no images";
      this.status.classList.add("error");
      return;
    }
    const tasks: Task[] = listing.images.map((entry) => ({
      id: entry.id,
      width: 0, // sized when the image loads
      height: 0,
    }));
    this.session = new AnnotationSession(tasks, listing.categories);
    this.buildTagControls(listing.categories);
    this.bindEvents();
    await this.show();
  }

  private buildTagControls(categories: string[]): void {
    for (const name of categories) {
      const label = document.createElement("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.value = name;
      box.addEventListener("change", () => this.syncTags());
      label.appendChild(box);
      label.appendChild(document.createTextNode(name));
      this.tagBox.appendChild(label);
    }
  }

  private syncTags(): void {
    const picked = Array.from(
      this.tagBox.querySelectorAll<HTMLInputElement>("input:checked"),
    ).map((el) => el.value);
    this.session.setTags(this.session.currentTask.id, picked);
  }

  private loadTags(): void {
    const tags = this.session.tags(this.session.currentTask.id);
    for (const el of this.tagBox.querySelectorAll<HTMLInputElement>("input")) {
      el.checked = tags.includes(el.value);
    }
  }

  private async show(): Promise<void> {
    const task = this.session.currentTask;
    await new Promise<void>((resolve, reject) => {
      this.image.onload = () => resolve();
      this.image.onerror = () => reject(new Error(`cannot load image ${task.id}`));
      this.image.src = `/api/image/${task.id}`;
    });
    task.width = this.image.naturalWidth;
    task.height = this.image.naturalHeight;
    this.canvas.width = task.width;
    this.canvas.height = task.height;
    this.shownAt = performance.now();
    this.loadTags();
    this.render();
  }

  private render(): void {
    const task = this.session.currentTask;
    const ctx = this.canvas.getContext("2d")!;
    ctx.drawImage(this.image, 0, 0);
    const strokes: Stroke[] = [...this.session.strokes(task.id)];
    if (this.drawing) {
      strokes.push({ label: this.label, radius: this.radius, points: this.drawing });
    }
    const mask = rasterizeStrokes(strokes, task.width, task.height);
    const overlay = ctx.getImageData(0, 0, task.width, task.height);
    for (let i = 0; i < mask.length; i++) {
      const color = OVERLAY_COLORS[mask[i]];
      if (!color) continue;
      const o = i * 4;
      const a = color[3] / 255;
      overlay.data[o] = overlay.data[o] * (1 - a) + color[0] * a;
      overlay.data[o + 1] = overlay.data[o + 1] * (1 - a) + color[1] * a;
      overlay.data[o + 2] = overlay.data[o + 2] * (1 - a) + color[2] * a;
    }
    ctx.putImageData(overlay, 0, 0);
    const n = this.session.strokeCount(task.id);
    this.status.textContent =
      `${task.id} (${this.session.current + 1}/${this.session.tasks.length}) — ` +
      `${this.label === FOREGROUND ? "foreground" : "background"} brush r=${this.radius}, ` +
      `${n} stroke${n === 1 ? "" : "s"}`;
    this.status.classList.remove("error");
  }

  private canvasPoint(ev: MouseEvent): Point {
    const rect = this.canvas.getBoundingClientRect();
    return {
      x: ((ev.clientX - rect.left) / rect.width) * this.canvas.width,
      y: ((ev.clientY - rect.top) / rect.height) * this.canvas.height,
    };
  }

  private bindEvents(): void {
    this.canvas.addEventListener("mousedown", (ev) => {
      this.drawing = [this.canvasPoint(ev)];
      this.render();
    });
    this.canvas.addEventListener("mousemove", (ev) => {
      if (!this.drawing) return;
      this.drawing.push(this.canvasPoint(ev));
      this.render();
    });
    const finish = () => {
      if (!this.drawing) return;
      this.session.commitStroke(this.session.currentTask.id, {
        label: this.label,
        radius: this.radius,
        points: this.drawing,
      });
      this.drawing = null;
      this.render();
    };
    this.canvas.addEventListener("mouseup", finish);
    this.canvas.addEventListener("mouseleave", finish);

    document.addEventListener("keydown", (ev) => {
      if ((ev.target as HTMLElement)?.tagName === "INPUT") return;
      switch (ev.key) {
        case "f":
          this.label = FOREGROUND;
          break;
        case "b":
          this.label = BACKGROUND;
          break;
        case "z":
          this.session.undo(this.session.currentTask.id);
          break;
        case "y":
          this.session.redo(this.session.currentTask.id);
          break;
        case "[":
          this.radius = Math.max(1, this.radius - 1);
          break;
        case "]":
          this.radius = Math.min(32, this.radius + 1);
          break;
        case "n":
          this.advance(+1);
          return;
        case "p":
          this.advance(-1);
          return;
        case "e":
          void this.export();
          return;
        default:
          return;
      }
      this.render();
    });
    document.getElementById("export")!.addEventListener("click", () => void this.export());
  }

  private advance(direction: number): void {
    this.recordElapsed();
    if (direction > 0) this.session.next();
    else this.session.prev();
    void this.show();
  }

  private recordElapsed(): void {
    const task = this.session.currentTask;
    this.session.addElapsed(task.id, (performance.now() - this.shownAt) / 1000);
    this.shownAt = performance.now();
  }

  private async export(): Promise<void> {
    this.recordElapsed();
    const task = this.session.currentTask;
    try {
      const payload = this.session.exportPayload(task);
      const resp = await fetch("/api/export", {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(payload),
      });
      const body = (await resp.json()) as { ok?: boolean; error?: string };
      if (!resp.ok || !body.ok) throw new Error(body.error ?? `HTTP ${resp.status}`);
      this.status.textContent = `${task.id}: exported`;
      this.status.classList.remove("error");
    } catch (err) {
      this.status.textContent =
        err instanceof ExportBlockedError
          ? `export blocked: ${err.message}`
          : `export failed: ${String(err)}`;
      this.status.classList.add("error");
    }
  }
}

window.addEventListener("DOMContentLoaded", () => {
  void new AnnotatorApp().start();
});
