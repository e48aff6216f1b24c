// Canvas rendering: a deterministic function of the session state.

import {
  AnnotationSession,
  Transform,
  sessionEdges,
  worldToScreen,
} from "./session.js";

export interface DrawingSurface {
  width: number;
  height: number;
  ctx: CanvasRenderingContext2D;
}

const POINT_RADIUS = 3.5;
const SELECTED_RADIUS = 5;

export function render(
  surface: DrawingSurface,
  session: AnnotationSession,
  transform: Transform
): void {
  const { ctx, width, height } = surface;
  ctx.clearRect(0, 0, width, height);

  // edges first, in click order, closing edge dashed
  ctx.lineWidth = 1.5;
  for (const [a, b, provisional] of sessionEdges(session)) {
    const pa = worldToScreen(transform, session.points[a]);
    const pb = worldToScreen(transform, session.points[b]);
    ctx.strokeStyle = provisional ? "#999999" : "#1560bd";
    ctx.setLineDash(provisional ? [6, 4] : []);
    ctx.beginPath();
    ctx.moveTo(pa[0], pa[1]);
    ctx.lineTo(pb[0], pb[1]);
    ctx.stroke();
  }
  ctx.setLineDash([]);

  const selected = new Set(session.clickOrder);
  session.points.forEach((p, i) => {
    const s = worldToScreen(transform, p);
    ctx.beginPath();
    ctx.fillStyle = selected.has(i) ? "#d2422b" : "#333333";
    ctx.arc(
      s[0],
      s[1],
      selected.has(i) ? SELECTED_RADIUS : POINT_RADIUS,
      0,
      2 * Math.PI
    );
    ctx.fill();
  });

  // order labels on selected points
  ctx.fillStyle = "#d2422b";
  ctx.font = "11px sans-serif";
  session.clickOrder.forEach((idx, k) => {
    const s = worldToScreen(transform, session.points[idx]);
    ctx.fillText(String(k + 1), s[0] + 6, s[1] - 6);
  });
}
