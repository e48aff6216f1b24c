// End-to-end round trip against the real benchmark server: a scripted
// session clicks k points (closed), saves, and the driver-side parse of the
// resulting GT-ORDERED file must reproduce the click order exactly.

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import {
  buildPayload,
  createSession,
  fitTransform,
  recordClick,
  toggleClosed,
  worldToScreen,
} from "../src/session.js";

const PY = process.env.CURVEBENCH_PYTHON ?? "python3";
const PORT = 8731;

function havePython(): boolean {
  const probe = spawnSync(PY, ["-c", "import curvebench"], { timeout: 30000 });
  return probe.status === 0;
}

const HAVE_PY = havePython();
const d = HAVE_PY ? describe : describe.skip;

d("annotator round trip against the live server", () => {
  let server: ChildProcess;
  let root: string;
  const api = new ApiClient(`http://127.0.0.1:${PORT}`);

  // 7 points on a circle, in scrambled file order
  const WORLD: Array<[number, number]> = [];
  for (let k = 0; k < 7; k++) {
    const th = (2 * Math.PI * ((k * 3) % 7)) / 7;
    WORLD.push([Math.cos(th), Math.sin(th)]);
  }

  beforeAll(async () => {
    root = mkdtempSync(join(tmpdir(), "annot-"));
    writeFileSync(
      join(root, "ring.txt"),
      WORLD.map(([x, y]) => `${x} ${y}`).join("\n") + "\n"
    );
    server = spawn(PY, [
      "-m",
      "curvebench.cli",
      "serve",
      "--root",
      root,
      "--port",
      String(PORT),
    ]);
    // wait for the port to accept requests
    for (let i = 0; i < 100; i++) {
      try {
        await api.listPointsets();
        return;
      } catch {
        await new Promise((r) => setTimeout(r, 100));
      }
    }
    throw new Error("server did not come up");
  }, 30000);

  afterAll(() => {
    server?.kill();
    rmSync(root, { recursive: true, force: true });
  });

  it("lists and loads the point set", async () => {
    expect(await api.listPointsets()).toEqual(["ring"]);
    const points = await api.getPointset("ring");
    expect(points).toHaveLength(7);
    expect(points[1][0]).toBeCloseTo(WORLD[1][0], 12);
  });

  it("scripted clicks produce a file the driver parses back identically", async () => {
    const points = await api.getPointset("ring");
    let session = createSession("ring", points);
    const transform = fitTransform(points, 900, 640);

    // click the points in true angular order by simulated canvas clicks
    const order = [0, 5, 3, 1, 6, 4, 2]; // file index of angle k/7: inverse of k*3 mod 7
    for (const idx of order) {
      const pos = worldToScreen(transform, points[idx]);
      const res = recordClick(session, transform, [pos[0] + 2, pos[1] - 2]);
      expect(res.picked).toBe(idx);
      session = res.session;
    }
    session = toggleClosed(session);
    const payload = buildPayload(session);
    const file = await api.saveGroundTruth("ring", payload);
    expect(file).toBe("ring.gt.txt");

    // parse server-side with the driver and compare against the click order
    const parse = spawnSync(PY, [
      "-c",
      [
        "import json, sys, numpy as np",
        "from curvebench.metrics import parse_ground_truth",
        `gt = parse_ground_truth(r'${join(root, "ring.gt.txt")}')`,
        "print(json.dumps({'n': len(gt.vertices), 'closed': bool(gt.closed),",
        "  'vertices': gt.vertices.tolist(), 'edges': gt.edges.tolist()}))",
      ].join("\n"),
    ]);
    expect(parse.status).toBe(0);
    const parsed = JSON.parse(parse.stdout.toString());
    expect(parsed.n).toBe(7);
    expect(parsed.closed).toBe(true);
    const clicked = order.map((i) => points[i]);
    expect(parsed.vertices).toEqual(clicked);
    expect(parsed.edges).toHaveLength(7); // closed polygon over 7 vertices
  });

  it("server echoes validation failures the client would also catch", async () => {
    await expect(
      api.saveGroundTruth("ring", { order: [0, 0, 1], closed: false })
    ).rejects.toMatchObject({ status: 400, index: 0 });
  });
});
