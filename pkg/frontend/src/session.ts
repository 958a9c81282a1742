/** Annotation session state: task list, per-image stroke stacks, tags,
 * undo/redo, timing, and export payload construction.
 *
 * The mask shown to the user is always a pure function of the stroke
 * stack, so undo (pop one stroke) restores the exact previous mask.
 */

import { labeledPixelCount, rasterizeStrokes, Stroke } from "./mask.js";

export interface Task {
  id: string;
  width: number;
  height: number;
}

interface ImageState {
  strokes: Stroke[];
  redo: Stroke[];
  tags: string[];
  elapsedSeconds: number;
}

export interface ExportPayload {
  id: string;
  width: number;
  height: number;
  /** base64 of the raw {0,1,2} code bytes, row-major */
  mask: string;
  tags: string[];
  elapsed_seconds: number;
}

export class ExportBlockedError extends Error {}

function encodeBase64(bytes: Uint8Array): string {
  // btoa in browsers, Buffer under node (vitest); typed via globalThis so the
  // browser build needs no node type definitions
  if (typeof btoa === "function") {
    let binary = "";
    const chunk = 0x8000;
    for (let i = 0; i < bytes.length; i += chunk) {
      binary += String.fromCharCode(...bytes.subarray(i, i + chunk));
    }
    return btoa(binary);
  }
  const nodeBuffer = (globalThis as {
    Buffer?: { from(data: Uint8Array): { toString(encoding: string): string } };
  }).Buffer;
  if (nodeBuffer) return nodeBuffer.from(bytes).toString("base64");
  throw new Error("no base64 encoder available");
}

export class AnnotationSession {
  readonly tasks: Task[];
  readonly categories: string[];
  current = 0;
  private states = new Map<string, ImageState>();

  constructor(tasks: Task[], categories: string[] = []) {
    if (tasks.length === 0) {
      throw new Error("no images to annotate");
    }
    this.tasks = tasks;
    this.categories = categories;
  }

  private state(id: string): ImageState {
    let st = this.states.get(id);
    if (!st) {
      st = { strokes: [], redo: [], tags: [], elapsedSeconds: 0 };
      this.states.set(id, st);
    }
    return st;
  }

  get currentTask(): Task {
    return this.tasks[this.current];
  }

  next(): Task {
    this.current = (this.current + 1) % this.tasks.length;
    return this.currentTask;
  }

  prev(): Task {
    this.current = (this.current + this.tasks.length - 1) % this.tasks.length;
    return this.currentTask;
  }

  commitStroke(id: string, stroke: Stroke): void {
    if (stroke.points.length === 0) return;
    const st = this.state(id);
    st.strokes.push(stroke);
    st.redo = [];
  }

  undo(id: string): boolean {
    const st = this.state(id);
    const stroke = st.strokes.pop();
    if (!stroke) return false;
    st.redo.push(stroke);
    return true;
  }

  redo(id: string): boolean {
    const st = this.state(id);
    const stroke = st.redo.pop();
    if (!stroke) return false;
    st.strokes.push(stroke);
    return true;
  }

  strokeCount(id: string): number {
    return this.state(id).strokes.length;
  }

  strokes(id: string): readonly Stroke[] {
    return this.state(id).strokes;
  }

  setTags(id: string, tags: string[]): void {
    this.state(id).tags = tags.filter((t) => this.categories.includes(t));
  }

  tags(id: string): string[] {
    return [...this.state(id).tags];
  }

  addElapsed(id: string, seconds: number): void {
    this.state(id).elapsedSeconds += seconds;
  }

  elapsed(id: string): number {
    return this.state(id).elapsedSeconds;
  }

  /** Mask for a task, recomputed from its stroke stack. */
  mask(task: Task): Uint8Array {
    return rasterizeStrokes(this.state(task.id).strokes, task.width, task.height);
  }

  /** Build the export payload; blocked while no stroke is committed. */
  exportPayload(task: Task): ExportPayload {
    const st = this.state(task.id);
    if (st.strokes.length === 0) {
      throw new ExportBlockedError("draw at least one stroke before exporting");
    }
    const mask = this.mask(task);
    if (labeledPixelCount(mask) === 0) {
      throw new ExportBlockedError("strokes left no labeled pixels");
    }
    return {
      id: task.id,
      width: task.width,
      height: task.height,
      mask: encodeBase64(mask),
      tags: this.tags(task.id),
      elapsed_seconds: st.elapsedSeconds,
    };
  }

  /** Serializable snapshot (stroke stacks, tags, timing). */
  toJSON(): string {
    const doc: Record<string, unknown> = { current: this.current, images: {} };
    const images = doc.images as Record<string, unknown>;
    for (const [id, st] of this.states) {
      images[id] = { strokes: st.strokes, tags: st.tags, elapsed: st.elapsedSeconds };
    }
    return JSON.stringify(doc);
  }

  restore(json: string): void {
    const doc = JSON.parse(json) as {
      current: number;
      images: Record<string, { strokes: Stroke[]; tags: string[]; elapsed: number }>;
    };
    this.current = doc.current ?? 0;
    this.states.clear();
    for (const [id, entry] of Object.entries(doc.images)) {
      this.states.set(id, {
        strokes: entry.strokes,
        redo: [],
        tags: entry.tags,
        elapsedSeconds: entry.elapsed,
      });
    }
  }
}
