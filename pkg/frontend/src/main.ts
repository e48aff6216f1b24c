// DOM wiring for the annotator page.

import { ApiClient, ApiError } from "./api.js";
import {
  AnnotationSession,
  Transform,
  buildPayload,
  canSave,
  createSession,
  fitTransform,
  recordClick,
  toggleClosed,
  undo,
} from "./session.js";
import { render } from "./view.js";

const api = new ApiClient(
  new URLSearchParams(location.search).get("api") ?? ""
);

let session: AnnotationSession | null = null;
let transform: Transform | null = null;

const canvas = document.getElementById("canvas") as HTMLCanvasElement;
const listEl = document.getElementById("pointsets") as HTMLUListElement;
const statusEl = document.getElementById("status") as HTMLDivElement;
const saveBtn = document.getElementById("save") as HTMLButtonElement;
const undoBtn = document.getElementById("undo") as HTMLButtonElement;
const closedBox = document.getElementById("closed") as HTMLInputElement;

function setStatus(text: string, isError = false): void {
  statusEl.textContent = text;
  statusEl.className = isError ? "error" : "";
}

function redraw(): void {
  if (!session || !transform) return;
  render(
    { ctx: canvas.getContext("2d")!, width: canvas.width, height: canvas.height },
    session,
    transform
  );
  saveBtn.disabled = !canSave(session);
  undoBtn.disabled = session.clickOrder.length === 0;
}

async function openPointset(id: string): Promise<void> {
  try {
    const points = await api.getPointset(id);
    if (points.length === 0) {
      session = null;
      setStatus(`point set '${id}' is empty; nothing to order`, true);
      return;
    }
    session = createSession(id, points);
    transform = fitTransform(points, canvas.width, canvas.height);
    closedBox.checked = false;
    setStatus(`${id}: ${points.length} points; click them in curve order`);
    redraw();
  } catch (err) {
    session = null;
    setStatus(`failed to load '${id}': ${(err as Error).message}`, true);
  }
}

async function refreshList(): Promise<void> {
  try {
    const ids = await api.listPointsets();
    listEl.innerHTML = "";
    for (const id of ids) {
      const li = document.createElement("li");
      const a = document.createElement("a");
      a.textContent = id;
      a.href = "#";
      a.addEventListener("click", (ev) => {
        ev.preventDefault();
        void openPointset(id);
      });
      li.appendChild(a);
      listEl.appendChild(li);
    }
    if (ids.length === 0) setStatus("no point sets on the server", true);
  } catch (err) {
    setStatus(`cannot reach server: ${(err as Error).message}`, true);
  }
}

canvas.addEventListener("click", (ev) => {
  if (!session || !transform) return;
  const rect = canvas.getBoundingClientRect();
  const pos: [number, number] = [ev.clientX - rect.left, ev.clientY - rect.top];
  const res = recordClick(session, transform, pos);
  if (res.picked === null) {
    setStatus("no unselected point within reach of that click");
    return;
  }
  session = res.session;
  setStatus(`picked point ${res.picked} (#${session.clickOrder.length})`);
  redraw();
});

undoBtn.addEventListener("click", () => {
  if (!session) return;
  session = undo(session);
  setStatus("undid last selection");
  redraw();
});

closedBox.addEventListener("change", () => {
  if (!session) return;
  session = toggleClosed(session);
  redraw();
});

saveBtn.addEventListener("click", () => {
  void (async () => {
    if (!session) return;
    let payload;
    try {
      payload = buildPayload(session);
    } catch (err) {
      setStatus((err as Error).message, true);
      return;
    }
    try {
      const file = await api.saveGroundTruth(session.pointsetId, payload);
      setStatus(`saved ${file}`);
    } catch (err) {
      if (err instanceof ApiError) {
        setStatus(`server rejected the order: ${err.message}`, true);
      } else {
        setStatus(
          `network failure (${(err as Error).message}); selection kept, retry`,
          true
        );
      }
    }
  })();
});

void refreshList();
