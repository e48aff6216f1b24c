"""Point-set annotation service.

Serves the point sets under a root directory and persists user-ordered
ground truth next to them:

    GET  /pointsets            -> ["id", ...]
    GET  /pointsets/{id}       -> {"id": ..., "points": [[x, y], ...]}
    POST /groundtruth/{id}     <- {"order": [indices], "closed": bool}
                               -> {"file": "{id}.gt.txt"}

Inputs are never mutated; ground-truth files are written atomically
(temp file + rename).  Responses carry permissive CORS headers so a
browser-hosted annotator can talk to the service directly.
"""

import json
import os
import tempfile
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np

from .driver import load_point_set
from .metrics import GroundTruth, write_ground_truth

_UI_TYPES = {".html": "text/html", ".js": "text/javascript",
             ".css": "text/css", ".map": "application/json"}


def list_point_set_ids(root):
    ids = []
    for name in sorted(os.listdir(root)):
        if name.endswith(".txt") and not name.endswith(".gt.txt"):
            ids.append(name[:-4])
    return ids


def save_ordered_ground_truth(root, ps_id, order, closed):
    """Validate an ordering against the stored point set and persist it as
    ORDERED_VERTICES, atomically.  Returns the file name."""
    path = os.path.join(root, ps_id + ".txt")
    if not os.path.isfile(path):
        raise FileNotFoundError(ps_id)
    ps = load_point_set(path)
    if not isinstance(order, list) or len(order) < 2:
        raise _Invalid("order must list at least 2 point indices", None)
    seen = set()
    for idx in order:
        if not isinstance(idx, int) or isinstance(idx, bool):
            raise _Invalid(f"index {idx!r} is not an integer", idx)
        if idx < 0 or idx >= len(ps):
            raise _Invalid(f"index {idx} out of range 0..{len(ps) - 1}", idx)
        if idx in seen:
            raise _Invalid(f"index {idx} repeated", idx)
        seen.add(idx)
    if not isinstance(closed, bool):
        raise _Invalid("closed must be a boolean", None)
    gt = GroundTruth.from_ordered(ps.points[np.asarray(order, dtype=np.int64)],
                                  closed=closed)
    out_name = ps_id + ".gt.txt"
    out_path = os.path.join(root, out_name)
    fd, tmp = tempfile.mkstemp(dir=root, prefix=".gt-", suffix=".tmp")
    os.close(fd)
    try:
        write_ground_truth(gt, tmp)
        os.replace(tmp, out_path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)
    return out_name


class _Invalid(Exception):
    def __init__(self, message, index):
        super().__init__(message)
        self.index = index


class _Handler(BaseHTTPRequestHandler):
    server_version = "curvebench"

    def _json(self, code, payload):
        body = json.dumps(payload).encode()
        self.send_response(code)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self._cors()
        self.end_headers()
        self.wfile.write(body)

    def _cors(self):
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")

    def log_message(self, fmt, *args):  # quiet by default
        if self.server.verbose:
            super().log_message(fmt, *args)

    def do_OPTIONS(self):
        self.send_response(204)
        self._cors()
        self.end_headers()

    def do_GET(self):
        root = self.server.root
        path = self.path.split("?", 1)[0].rstrip("/") or "/"
        if path == "/pointsets":
            self._json(200, list_point_set_ids(root))
            return
        if path.startswith("/pointsets/"):
            ps_id = path[len("/pointsets/"):]
            fp = os.path.join(root, ps_id + ".txt")
            if "/" in ps_id or not os.path.isfile(fp):
                self._json(404, {"error": f"unknown point set {ps_id!r}"})
                return
            ps = load_point_set(fp)
            self._json(200, {"id": ps_id, "points": ps.points.tolist()})
            return
        if self.server.ui_dir:
            rel = "index.html" if path == "/" else path.lstrip("/")
            fp = os.path.normpath(os.path.join(self.server.ui_dir, rel))
            if fp.startswith(os.path.abspath(self.server.ui_dir)) and os.path.isfile(fp):
                ext = os.path.splitext(fp)[1]
                with open(fp, "rb") as f:
                    body = f.read()
                self.send_response(200)
                self.send_header("Content-Type", _UI_TYPES.get(ext, "application/octet-stream"))
                self.send_header("Content-Length", str(len(body)))
                self._cors()
                self.end_headers()
                self.wfile.write(body)
                return
        self._json(404, {"error": "not found"})

    def do_POST(self):
        path = self.path.rstrip("/")
        if not path.startswith("/groundtruth/"):
            self._json(404, {"error": "not found"})
            return
        ps_id = path[len("/groundtruth/"):]
        try:
            length = int(self.headers.get("Content-Length", "0"))
            payload = json.loads(self.rfile.read(length) or b"{}")
        except (ValueError, json.JSONDecodeError):
            self._json(400, {"error": "malformed JSON body"})
            return
        try:
            name = save_ordered_ground_truth(self.server.root, ps_id,
                                             payload.get("order"),
                                             payload.get("closed"))
        except FileNotFoundError:
            self._json(404, {"error": f"unknown point set {ps_id!r}"})
            return
        except _Invalid as exc:
            self._json(400, {"error": str(exc), "index": exc.index})
            return
        self._json(200, {"file": name})


def serve(root, port, host="127.0.0.1", ui_dir=None, verbose=False):
    """Build the HTTP server (call ``serve_forever`` to run it)."""
    root = os.path.abspath(root)
    if not os.path.isdir(root):
        raise NotADirectoryError(root)
    httpd = ThreadingHTTPServer((host, port), _Handler)
    httpd.root = root
    httpd.ui_dir = os.path.abspath(ui_dir) if ui_dir else None
    httpd.verbose = verbose
    return httpd
