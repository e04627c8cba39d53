"""HTTP service: scenario listing, trace lifecycle, streaming."""

import json
import math

import pytest
from fastapi.testclient import TestClient

from monodromy.runner import RunRequest, run_request
from monodromy.scenarios import SCENARIO_IDS
from monodromy.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(frontend_dir=""))


def parse_sse(text):
    """Split an SSE body into (event, data) pairs."""
    events = []
    for block in text.strip().split("\n\n"):
        lines = block.split("\n")
        event = next(l[len("event: "):] for l in lines if l.startswith("event: "))
        data = next(l[len("data: "):] for l in lines if l.startswith("data: "))
        events.append((event, json.loads(data)))
    return events


class TestScenarioListing:
    def test_lists_the_six_scenarios(self, client):
        r = client.get("/api/scenarios")
        assert r.status_code == 200
        ids = [s["id"] for s in r.json()]
        assert ids == list(SCENARIO_IDS)
        for entry in r.json():
            assert entry["degree"] in (2, 3, 4, 5)
            assert entry["description"]


class TestTraceLifecycle:
    def test_submit_fetch_matches_direct_run(self, client):
        r = client.post("/api/traces", json={"scenario": "quadratic-swap"})
        assert r.status_code == 200
        trace_id = r.json()["id"]
        fetched = client.get(f"/api/traces/{trace_id}")
        assert fetched.status_code == 200
        direct = run_request(RunRequest(scenario="quadratic-swap")).to_json_dict()
        assert fetched.json() == json.loads(json.dumps(direct))

    def test_unknown_id_is_404(self, client):
        assert client.get("/api/traces/t-999999").status_code == 404
        assert client.get("/api/traces/t-999999/stream").status_code == 404

    def test_invalid_request_is_400(self, client):
        assert client.post("/api/traces", json={"scenario": "nope"}).status_code == 400
        assert client.post("/api/traces", json={}).status_code == 400
        assert client.post("/api/traces",
                           json={"scenario": "quadratic-swap",
                                 "exprs": ["root(2, a0"]}).status_code == 400
        r = client.post("/api/traces", content=b"{not json",
                        headers={"content-type": "application/json"})
        assert r.status_code == 400

    def test_ids_are_opaque_and_distinct(self, client):
        r1 = client.post("/api/traces", json={"scenario": "quadratic-swap"})
        r2 = client.post("/api/traces", json={"scenario": "quadratic-swap"})
        assert r1.json()["id"] != r2.json()["id"]


class TestStreaming:
    def test_stream_replays_frames_in_order_then_verdict(self, client):
        r = client.post("/api/traces", json={"scenario": "cubic-commutator"})
        trace_id = r.json()["id"]
        doc = client.get(f"/api/traces/{trace_id}").json()
        stream = client.get(f"/api/traces/{trace_id}/stream")
        assert stream.status_code == 200
        assert stream.headers["content-type"].startswith("text/event-stream")
        events = parse_sse(stream.text)
        frames = [d for e, d in events if e == "frame"]
        verdicts = [d for e, d in events if e == "verdict"]
        assert len(frames) == len(doc["frames"])
        assert [f["index"] for f in frames] == list(range(len(frames)))
        for streamed, stored in zip(frames, doc["frames"]):
            assert streamed["roots"] == stored["roots"]
            assert streamed["coeffs"] == stored["coeffs"]
            assert streamed["expr_values"] == stored["expr_values"]
        assert len(verdicts) == 1
        assert verdicts[0]["verdict"] == doc["verdict"]
        assert verdicts[0]["final_permutation"] == doc["final_permutation"]

    def test_fetch_after_stream_identical(self, client):
        r = client.post("/api/traces", json={"scenario": "quadratic-swap"})
        trace_id = r.json()["id"]
        first = client.get(f"/api/traces/{trace_id}").json()
        client.get(f"/api/traces/{trace_id}/stream")
        second = client.get(f"/api/traces/{trace_id}").json()
        assert first == second

    def test_survey_stream_carries_survey_block(self, client):
        r = client.post("/api/traces", json={"scenario": "quintic-arnold"})
        trace_id = r.json()["id"]
        events = parse_sse(client.get(f"/api/traces/{trace_id}/stream").text)
        verdict = events[-1]
        assert verdict[0] == "verdict"
        assert verdict[1]["survey"]["group_order"] == 120
        assert verdict[1]["survey"]["solvable"] is False


class TestCustomRuns:
    def test_recorded_circle_loop_is_identity(self, client):
        circle = [[-1 + 2 * math.cos(a), 2 * math.sin(a)]
                  for a in [i * 2 * math.pi / 60 for i in range(61)]]
        body = {"scenario": "custom",
                "custom": {"degree": 2, "start": [[1, 0], [-1, 0]],
                           "loops": [{"root": 1, "points": circle}],
                           "stack": [{"loop": 0}]}}
        r = client.post("/api/traces", json=body)
        assert r.status_code == 200
        doc = client.get(f"/api/traces/{r.json()['id']}").json()
        assert doc["final_permutation"] == "()"
        assert doc["verdict"] == "inconclusive"

    def test_recorded_half_loop_swaps(self, client):
        half = [[math.cos(a), math.sin(a)]
                for a in [i * math.pi / 40 for i in range(41)]]
        body = {"scenario": "custom",
                "custom": {"degree": 2, "start": [[1, 0], [-1, 0]],
                           "loops": [{"root": 1, "points": half, "target": 2}],
                           "stack": [{"loop": 0}]}}
        r = client.post("/api/traces", json=body)
        assert r.status_code == 200
        doc = client.get(f"/api/traces/{r.json()['id']}").json()
        assert doc["final_permutation"] == "(1 2)"
        assert doc["verdict"] == "formula-cannot-trace-roots"

    def test_commutator_stack_verdict(self, client):
        # two recorded swap drags; the four-entry stack runs their commutator
        def arc(za, zb):
            mid = complex((za[0] + zb[0]) / 2, (za[1] + zb[1]) / 2)
            a = complex(*za)
            rad = abs(a - mid)
            phase0 = math.atan2(a.imag - mid.imag, a.real - mid.real)
            return [[mid.real + rad * math.cos(phase0 + u * math.pi),
                     mid.imag + rad * math.sin(phase0 + u * math.pi)]
                    for u in [i / 40 for i in range(41)]]

        start = [[math.cos(2 * math.pi * k / 3), math.sin(2 * math.pi * k / 3)]
                 for k in range(3)]
        body = {"scenario": "custom",
                "custom": {"degree": 3, "start": start,
                           "loops": [
                               {"root": 1, "points": arc(start[0], start[1]), "target": 2},
                               {"root": 2, "points": arc(start[1], start[2]), "target": 3}],
                           "stack": [{"loop": 1, "invert": True},
                                     {"loop": 0, "invert": True},
                                     {"loop": 1}, {"loop": 0}]}}
        r = client.post("/api/traces", json=body)
        assert r.status_code == 200
        doc = client.get(f"/api/traces/{r.json()['id']}").json()
        assert doc["final_permutation"] != "()"
        assert doc["verdict"] == "formula-cannot-trace-roots"
        # consistent with the engine's own commutator of the two drags
        from monodromy.permutations import Permutation, commutator_perm
        a = Permutation.from_cycles(3, [(1, 2)])
        b = Permutation.from_cycles(3, [(2, 3)])
        assert doc["final_permutation"] == commutator_perm(a, b).cycle_string()

    def test_unsnappable_drag_rejected(self, client):
        stray = [[1, 0], [1.2, 0.4], [3.7, 2.1]]
        body = {"scenario": "custom",
                "custom": {"degree": 2, "start": [[1, 0], [-1, 0]],
                           "loops": [{"root": 1, "points": stray}],
                           "stack": [{"loop": 0}]}}
        assert client.post("/api/traces", json=body).status_code == 400
