import json
from pathlib import Path

import numpy as np
import pytest

from avsearch.errors import ExtractorMismatchError, RemoteExtractionError
from avsearch.extract import ExtractorDescriptor, ReferenceExtractor
from avsearch.extract_service import create_extract_app
from avsearch.remote import ExtractItem, RemoteExtractionClient, RemoteExtractor

from helpers import ServerThread, free_port

FIXTURES = Path(__file__).parent / "fixtures" / "extract_protocol"


@pytest.fixture(scope="module")
def server():
    srv = ServerThread(create_extract_app(ReferenceExtractor())).start()
    yield srv
    srv.stop()


@pytest.fixture(scope="module")
def client(server):
    return RemoteExtractionClient(server.endpoint, retries=2, backoff_sec=0.05)


def scene_desc():
    return ExtractorDescriptor(
        ReferenceExtractor.NAME, "scene", 256, ReferenceExtractor.VERSION
    )


class TestProtocol:
    def test_results_order_aligned(self, client):
        items = [ExtractItem(i, "text", f"token{i}") for i in range(5)]
        results = client.extract_batch(scene_desc(), items)
        assert [r.id for r in results] == [0, 1, 2, 3, 4]
        assert all(r.ok for r in results)

    def test_matches_local_reference(self, client):
        ref = ReferenceExtractor()
        [res] = client.extract_batch(scene_desc(), [ExtractItem(0, "text", "horse")])
        np.testing.assert_allclose(res.embedding, ref.embed_text("horse"), atol=1e-6)

    def test_unit_norm(self, client):
        results = client.extract_batch(
            scene_desc(), [ExtractItem(i, "text", t) for i, t in
                           enumerate(["a", "b c", "d e f"])]
        )
        for r in results:
            assert abs(np.linalg.norm(r.embedding) - 1.0) < 1e-6

    def test_per_item_failure_keeps_batch(self, client):
        items = [
            ExtractItem(0, "text", "fine"),
            ExtractItem(1, "text", "   "),  # no tokens
            ExtractItem(2, "text", "also fine"),
        ]
        results = client.extract_batch(scene_desc(), items)
        assert [r.ok for r in results] == [True, False, True]
        assert results[1].error

    def test_batching_is_transparent(self, client):
        texts = ["one", "two", "three", "four"]
        combined = client.extract_batch(
            scene_desc(), [ExtractItem(i, "text", t) for i, t in enumerate(texts)]
        )
        split = client.extract_batch(
            scene_desc(), [ExtractItem(i, "text", t) for i, t in enumerate(texts[:2])]
        ) + client.extract_batch(
            scene_desc(),
            [ExtractItem(i + 2, "text", t) for i, t in enumerate(texts[2:])],
        )
        for a, b in zip(combined, split):
            np.testing.assert_array_equal(a.embedding, b.embedding)

    def test_version_mismatch_409(self, client):
        bad = ExtractorDescriptor(ReferenceExtractor.NAME, "scene", 256, "999")
        with pytest.raises(ExtractorMismatchError):
            client.extract_batch(bad, [ExtractItem(0, "text", "x")])

    def test_unreachable_endpoint_errors_after_retries(self):
        dead = RemoteExtractionClient(
            f"http://127.0.0.1:{free_port()}", retries=2, backoff_sec=0.01
        )
        with pytest.raises(RemoteExtractionError):
            dead.extract_batch(scene_desc(), [ExtractItem(0, "text", "x")])


class TestRemoteExtractor:
    def test_embeds_match_local(self, server):
        remote = RemoteExtractor(server.endpoint)
        local = ReferenceExtractor()
        np.testing.assert_allclose(
            remote.embed_text("a steam train"), local.embed_text("a steam train"),
            atol=1e-6,
        )
        assert remote.descriptor("scene").identity == local.descriptor("scene").identity


class TestGoldenFixtures:
    """Shared conformance fixtures; the sidecar replays the same files."""

    @pytest.mark.parametrize("fixture", sorted(FIXTURES.glob("*.json")),
                             ids=lambda p: p.stem)
    def test_fixture(self, server, fixture):
        import httpx

        case = json.loads(fixture.read_text())
        resp = httpx.post(f"{server.endpoint}/extract", json=case["request"])
        assert resp.status_code == case["status"]
        body = resp.json()
        if case["status"] == 200:
            got = body["results"]
            want = case["response"]["results"]
            assert len(got) == len(want)
            for g, w in zip(got, want):
                assert g["id"] == w["id"] and g["ok"] == w["ok"]
                if w["ok"]:
                    np.testing.assert_allclose(
                        g["embedding"], w["embedding"], atol=1e-6
                    )
        else:
            assert body.get("error") == case["response"]["error"]
