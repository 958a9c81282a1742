/** Scribble mask codes and display colors, matching the dataset palette:
 *  red strokes = foreground, green = background, black = unlabeled. */

export const UNLABELED = 0;
export const FOREGROUND = 1;
export const BACKGROUND = 2;

export type Label = typeof FOREGROUND | typeof BACKGROUND;

/** RGBA used when compositing the mask over the image on the canvas. */
export const OVERLAY_COLORS: Record<number, [number, number, number, number]> = {
  [FOREGROUND]: [255, 0, 0, 220],
  [BACKGROUND]: [0, 255, 0, 220],
};

/** Exact palette colors of the exported raster (alpha-free). */
export const EXPORT_COLORS: Record<number, [number, number, number]> = {
  [UNLABELED]: [0, 0, 0],
  [FOREGROUND]: [255, 0, 0],
  [BACKGROUND]: [0, 255, 0],
};
