// Annotation session state and the pure operations on it.  The session only
// orders existing points; it never creates or moves them.

export type Point = [number, number];

export interface AnnotationSession {
  pointsetId: string;
  points: ReadonlyArray<Point>;
  clickOrder: ReadonlyArray<number>;
  closed: boolean;
}

export interface Transform {
  scale: number;
  offsetX: number;
  offsetY: number;
}

export const PICK_RADIUS_PX = 8;

export function createSession(
  pointsetId: string,
  points: ReadonlyArray<Point>
): AnnotationSession {
  return { pointsetId, points, clickOrder: [], closed: false };
}

export function worldToScreen(t: Transform, p: Point): Point {
  return [p[0] * t.scale + t.offsetX, p[1] * t.scale + t.offsetY];
}

export function screenToWorld(t: Transform, p: Point): Point {
  return [(p[0] - t.offsetX) / t.scale, (p[1] - t.offsetY) / t.scale];
}

/** Fit-to-viewport transform with preserved aspect ratio. */
export function fitTransform(
  points: ReadonlyArray<Point>,
  width: number,
  height: number,
  margin = 24
): Transform {
  if (points.length === 0) {
    return { scale: 1, offsetX: width / 2, offsetY: height / 2 };
  }
  let minX = Infinity,
    minY = Infinity,
    maxX = -Infinity,
    maxY = -Infinity;
  for (const [x, y] of points) {
    minX = Math.min(minX, x);
    minY = Math.min(minY, y);
    maxX = Math.max(maxX, x);
    maxY = Math.max(maxY, y);
  }
  const spanX = maxX - minX || 1;
  const spanY = maxY - minY || 1;
  const scale = Math.min(
    (width - 2 * margin) / spanX,
    (height - 2 * margin) / spanY
  );
  // center the bounding box in the viewport
  const offsetX = (width - scale * (minX + maxX)) / 2;
  const offsetY = (height - scale * (minY + maxY)) / 2;
  return { scale, offsetX, offsetY };
}

/**
 * Nearest unselected point within the pick radius (screen space), or null.
 * The radius is constant in pixels, independent of zoom.
 */
export function pickPoint(
  session: AnnotationSession,
  transform: Transform,
  canvasPos: Point,
  pickRadius = PICK_RADIUS_PX
): number | null {
  const selected = new Set(session.clickOrder);
  let best: number | null = null;
  let bestD = pickRadius * pickRadius;
  session.points.forEach((p, i) => {
    if (selected.has(i)) return;
    const s = worldToScreen(transform, p);
    const dx = s[0] - canvasPos[0];
    const dy = s[1] - canvasPos[1];
    const d = dx * dx + dy * dy;
    if (d <= bestD) {
      bestD = d;
      best = i;
    }
  });
  return best;
}

/** Append the picked point, if any; clicks in empty space are no-ops. */
export function recordClick(
  session: AnnotationSession,
  transform: Transform,
  canvasPos: Point,
  pickRadius = PICK_RADIUS_PX
): { session: AnnotationSession; picked: number | null } {
  const picked = pickPoint(session, transform, canvasPos, pickRadius);
  if (picked === null) {
    return { session, picked: null };
  }
  return {
    session: { ...session, clickOrder: [...session.clickOrder, picked] },
    picked,
  };
}

export function undo(session: AnnotationSession): AnnotationSession {
  if (session.clickOrder.length === 0) return session;
  return { ...session, clickOrder: session.clickOrder.slice(0, -1) };
}

export function toggleClosed(session: AnnotationSession): AnnotationSession {
  return { ...session, closed: !session.closed };
}

export function canSave(session: AnnotationSession): boolean {
  return session.clickOrder.length >= 2;
}

/**
 * Payload for POST /groundtruth/{id}.  Mirrors the server-side rules so a
 * bad order never leaves the client: indices must be in range and unique.
 */
export function buildPayload(session: AnnotationSession): {
  order: number[];
  closed: boolean;
} {
  if (!canSave(session)) {
    throw new Error("select at least 2 points before saving");
  }
  const seen = new Set<number>();
  for (const idx of session.clickOrder) {
    if (!Number.isInteger(idx) || idx < 0 || idx >= session.points.length) {
      throw new Error(`index ${idx} out of range`);
    }
    if (seen.has(idx)) {
      throw new Error(`index ${idx} repeated`);
    }
    seen.add(idx);
  }
  return { order: [...session.clickOrder], closed: session.closed };
}

/** Edge index pairs implied by the current ordering (for rendering). */
export function sessionEdges(
  session: AnnotationSession
): Array<[number, number, boolean]> {
  const out: Array<[number, number, boolean]> = [];
  const o = session.clickOrder;
  for (let k = 0; k + 1 < o.length; k++) {
    out.push([o[k], o[k + 1], false]);
  }
  if (session.closed && o.length > 2) {
    out.push([o[o.length - 1], o[0], true]); // provisional closing edge
  }
  return out;
}
