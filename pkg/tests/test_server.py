"""Annotation service tests over a live local HTTP server."""

import json
import threading
import urllib.error
import urllib.request

import numpy as np
import pytest

from curvebench import PointSet
from curvebench.driver import save_point_set
from curvebench.metrics import parse_ground_truth
from curvebench.server import serve


@pytest.fixture
def live_server(tmp_path):
    ps = PointSet([[0.0, 0.0], [2.0, 0.0], [1.0, 1.5], [0.25, 0.75]])
    save_point_set(ps, tmp_path / "tri.txt")
    save_point_set(ps, tmp_path / "other.txt")
    httpd = serve(tmp_path, port=0)
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{httpd.server_address[1]}"
    yield base, tmp_path
    httpd.shutdown()
    httpd.server_close()


def get(url):
    with urllib.request.urlopen(url) as resp:
        return resp.status, json.loads(resp.read())


def post(url, payload):
    req = urllib.request.Request(url, data=json.dumps(payload).encode(),
                                 headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as err:
        return err.code, json.loads(err.read())


def test_list_pointsets(live_server):
    base, _ = live_server
    status, body = get(base + "/pointsets")
    assert status == 200
    assert body == ["other", "tri"]


def test_get_pointset(live_server):
    base, _ = live_server
    status, body = get(base + "/pointsets/tri")
    assert status == 200
    assert body["id"] == "tri"
    assert body["points"] == [[0.0, 0.0], [2.0, 0.0], [1.0, 1.5], [0.25, 0.75]]


def test_unknown_id_404(live_server):
    base, _ = live_server
    with pytest.raises(urllib.error.HTTPError) as err:
        get(base + "/pointsets/nope")
    assert err.value.code == 404
    status, body = post(base + "/groundtruth/nope", {"order": [0, 1], "closed": True})
    assert status == 404


def test_post_ground_truth_round_trip(live_server):
    base, root = live_server
    status, body = post(base + "/groundtruth/tri",
                        {"order": [0, 2, 1], "closed": True})
    assert status == 200
    assert body["file"] == "tri.gt.txt"
    gt = parse_ground_truth(root / "tri.gt.txt")
    assert gt.source_form == "ordered" and gt.closed
    assert (root / "tri.gt.txt").read_text().splitlines()[0] == "GT-ORDERED 3 closed"
    assert np.array_equal(gt.vertices, [[0.0, 0.0], [1.0, 1.5], [2.0, 0.0]])
    assert gt.edge_set() == {(0, 1), (1, 2), (0, 2)}


def test_post_rejects_repeated_index(live_server):
    base, _ = live_server
    status, body = post(base + "/groundtruth/tri", {"order": [0, 0, 1], "closed": False})
    assert status == 400
    assert body["index"] == 0
    assert "repeated" in body["error"]


def test_post_rejects_out_of_range(live_server):
    base, _ = live_server
    status, body = post(base + "/groundtruth/tri", {"order": [0, 9], "closed": False})
    assert status == 400
    assert body["index"] == 9


def test_post_rejects_short_or_malformed(live_server):
    base, _ = live_server
    status, _ = post(base + "/groundtruth/tri", {"order": [0], "closed": True})
    assert status == 400
    status, _ = post(base + "/groundtruth/tri", {"order": [0, 1], "closed": "yes"})
    assert status == 400
    req = urllib.request.Request(base + "/groundtruth/tri", data=b"not json",
                                 headers={"Content-Type": "application/json"})
    try:
        urllib.request.urlopen(req)
        raise AssertionError("expected 400")
    except urllib.error.HTTPError as err:
        assert err.code == 400


def test_inputs_never_mutated(live_server):
    base, root = live_server
    before = (root / "tri.txt").read_bytes()
    post(base + "/groundtruth/tri", {"order": [0, 1, 2, 3], "closed": False})
    assert (root / "tri.txt").read_bytes() == before
    # ground-truth files do not show up as point sets
    status, body = get(base + "/pointsets")
    assert body == ["other", "tri"]


def test_concurrent_posts_atomic(live_server):
    base, root = live_server
    errors = []

    def worker(k):
        order = [0, 1, 2, 3] if k % 2 == 0 else [3, 2, 1, 0]
        status, _ = post(base + "/groundtruth/other", {"order": order, "closed": False})
        if status != 200:
            errors.append(status)

    threads = [threading.Thread(target=worker, args=(k,)) for k in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    gt = parse_ground_truth(root / "other.gt.txt")
    assert len(gt.vertices) == 4  # one of the two orders, never a torn file


def test_cors_preflight(live_server):
    base, _ = live_server
    req = urllib.request.Request(base + "/groundtruth/tri", method="OPTIONS")
    with urllib.request.urlopen(req) as resp:
        assert resp.status == 204
        assert resp.headers["Access-Control-Allow-Origin"] == "*"
