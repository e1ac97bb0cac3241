"""Wire-protocol conformance.

Replays the golden request/response fixtures shared with the search
engine's client tests, then checks the per-batch invariants: order
alignment, unit-norm outputs, per-item failure isolation, and identity
enforcement.
"""
import json
from pathlib import Path

import numpy as np
import pytest
from fastapi.testclient import TestClient

from avsearch_sidecar import TokenHashModel, create_app

FIXTURES = Path(__file__).resolve().parents[2] / "tests" / "fixtures" / "extract_protocol"


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(TokenHashModel()))


class TestGoldenFixtures:
    @pytest.mark.parametrize("fixture", sorted(FIXTURES.glob("*.json")),
                             ids=lambda p: p.stem)
    def test_fixture(self, client, fixture):
        case = json.loads(fixture.read_text())
        resp = client.post("/extract", json=case["request"])
        assert resp.status_code == case["status"]
        body = resp.json()
        if case["status"] == 200:
            got = body["results"]
            want = case["response"]["results"]
            assert len(got) == len(want)
            for g, w in zip(got, want):
                assert g["id"] == w["id"] and g["ok"] == w["ok"]
                if w["ok"]:
                    np.testing.assert_allclose(g["embedding"], w["embedding"],
                                               atol=1e-6)
        else:
            assert body.get("error") == case["response"]["error"]


def batch(texts, name="reference-hash", version="1"):
    return {
        "extractor": {"name": name, "version": version, "modality": "scene"},
        "items": [{"id": i, "payload_kind": "text", "payload": t}
                  for i, t in enumerate(texts)],
    }


class TestProtocolInvariants:
    def test_order_aligned(self, client):
        texts = [f"token{i}" for i in range(8)]
        results = client.post("/extract", json=batch(texts)).json()["results"]
        assert [r["id"] for r in results] == list(range(8))
        assert all(r["ok"] for r in results)

    def test_all_embeddings_unit_norm(self, client):
        texts = ["a", "b c", "d e f", "many words in one payload here"]
        results = client.post("/extract", json=batch(texts)).json()["results"]
        for r in results:
            assert abs(np.linalg.norm(r["embedding"]) - 1.0) < 1e-6

    def test_per_item_failure_keeps_batch(self, client):
        results = client.post(
            "/extract", json=batch(["fine", "   ", "also fine"])
        ).json()["results"]
        assert [r["ok"] for r in results] == [True, False, True]
        assert results[1]["error"]

    def test_identity_mismatch_409(self, client):
        resp = client.post("/extract", json=batch(["x"], version="999"))
        assert resp.status_code == 409
        assert resp.json()["error"] == "extractor_mismatch"

    def test_info_advertises_identity(self, client):
        body = client.get("/info").json()
        assert body == {"name": "reference-hash", "version": "1", "dim": 256,
                        "modalities": ["scene", "region", "face", "audio"]}

    def test_determinism_across_instances(self):
        a = TestClient(create_app(TokenHashModel()))
        b = TestClient(create_app(TokenHashModel()))
        ra = a.post("/extract", json=batch(["same input"])).json()["results"]
        rb = b.post("/extract", json=batch(["same input"])).json()["results"]
        assert ra == rb
