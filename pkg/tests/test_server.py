import pytest
from fastapi.testclient import TestClient

from tgmatch import analytics
from tgmatch.core import stats
from tgmatch.server import create_app
from tgmatch.workspace import Workspace
from conftest import FIXTURE_EDGES, FIXTURE_NODES, THINNED_EDGES


@pytest.fixture
def ws(tmp_path):
    return Workspace(tmp_path / "ws")


@pytest.fixture
def client(ws):
    return TestClient(create_app(ws))


def upload(client, graph_id="g1", edges=FIXTURE_EDGES):
    r = client.post("/api/graphs", json={
        "id": graph_id, "edges_csv": edges, "nodes_csv": FIXTURE_NODES})
    assert r.status_code == 201, r.text
    return r.json()


def test_upload_and_list(client):
    body = upload(client)
    assert body["nodes"] == 4
    assert body["edges"] == 5
    listed = client.get("/api/graphs").json()["graphs"]
    assert [g["id"] for g in listed] == ["g1"]


def test_analytics_endpoints_match_engine(client, ws):
    upload(client)
    view = ws.view("g1")

    assert client.get("/api/graphs/g1/stats").json() == stats(view).to_dict()
    assert client.get("/api/graphs/g1/histogram", params={"bin_width": 100}).json() == \
        analytics.activity_histogram(view, 100.0).to_dict()
    scatter = client.get("/api/graphs/g1/scatter").json()["points"]
    expected = [{"person": p.person, "time": p.time, "channel": p.channel, "edge": p.edge_ref}
                for p in analytics.person_scatter(view)]
    assert scatter == expected
    assert client.get("/api/graphs/g1/spatial").json()["countries"] == \
        analytics.spatial_distribution(view)
    assert client.get("/api/graphs/g1/structure").json() == \
        analytics.structure_projection(view).to_dict()
    assert client.get("/api/graphs/g1/persons/1/channels").json()["channels"] == \
        analytics.person_channel_counts(view, 1)


def test_heatmap_endpoint(client):
    upload(client)
    r = client.post("/api/heatmap", json={
        "items": [{"graph": "g1", "person": 1}, {"graph": "g1", "person": 2}],
        "channel": "email", "bin_width": 100.0})
    assert r.status_code == 200
    assert r.json()["cells"] == [[1, 1], [1, 1]]


def test_error_shape_404(client):
    r = client.get("/api/graphs/nope/histogram")
    assert r.status_code == 404
    body = r.json()
    assert body["error"]["code"] == "UnknownGraph"
    assert "nope" in body["error"]["message"]


def test_error_shape_400_bad_csv(client):
    r = client.post("/api/graphs", json={"id": "bad", "edges_csv": "oops\n"})
    assert r.status_code == 400
    assert r.json()["error"]["code"] == "MissingHeader"


def test_view_update_changes_payloads_only_for_that_graph(client):
    upload(client, "a")
    upload(client, "b")
    before_a = client.get("/api/graphs/a/scatter").text
    before_b = client.get("/api/graphs/b/scatter").text
    r = client.put("/api/graphs/a/view", json={"channels": ["email"]})
    assert r.status_code == 200
    after_a = client.get("/api/graphs/a/scatter").text
    after_b = client.get("/api/graphs/b/scatter").text
    assert after_a != before_a
    assert after_b == before_b
    hist = client.get("/api/graphs/a/histogram", params={"bin_width": 100}).json()
    assert sum(hist["counts"]) == 2  # only the two email edges remain


def test_view_update_offset_and_range(client):
    upload(client)
    r = client.put("/api/graphs/g1/view", json={"time_range": [100, 200], "time_offset": 0})
    assert r.status_code == 200
    st = client.get("/api/graphs/g1/stats").json()
    assert st["visible_edges"] == 2
    r = client.put("/api/graphs/g1/view", json={"clear_time_range": True})
    assert client.get("/api/graphs/g1/stats").json()["visible_edges"] == 5


def test_delete_graph(client):
    upload(client)
    assert client.delete("/api/graphs/g1").status_code == 200
    assert client.get("/api/graphs").json()["graphs"] == []
    assert client.delete("/api/graphs/g1").status_code == 404


def test_session_flow(client):
    upload(client, "template")
    upload(client, "target")
    r = client.post("/api/sessions", json={
        "template": "template", "target": "target", "seed": {"1": 1, "2": 2}})
    assert r.status_code == 201, r.text
    body = r.json()
    sid = body["id"]
    assert body["S_size"] == 2
    assert body["T_size"] == 2

    cands = client.get(f"/api/sessions/{sid}/candidates", params={"k": 3}).json()["candidates"]
    assert cands
    top = cands[0]
    assert top["score"]["total"] == pytest.approx(1.0, abs=1e-9)
    assert top["evidence"]["template"]["nodes"]

    r = client.post(f"/api/sessions/{sid}/decisions", json={
        "template_node": top["frontier"], "target_node": top["candidate"],
        "verdict": "accept"})
    assert r.status_code == 200
    assert r.json()["S_size"] == 3
    log = r.json()["log"]
    assert log[-1]["actor"] == "user"
    assert log[-1]["verdict"] == "accept"

    # conflicting accept -> 409 (frontier already matched)
    r = client.post(f"/api/sessions/{sid}/decisions", json={
        "template_node": top["frontier"], "target_node": 4, "verdict": "accept"})
    assert r.status_code == 409
    assert r.json()["error"]["code"] == "AlreadyMatched"

    r = client.post(f"/api/sessions/{sid}/run-auto", json={"max_iterations": 100})
    assert r.status_code == 200
    assert r.json()["status"] == "complete"
    assert r.json()["T_size"] == 0


def test_session_auto_seed_and_export(client):
    upload(client, "template")
    upload(client, "target")
    r = client.post("/api/sessions", json={
        "template": "template", "target": "target", "auto_seed": True})
    assert r.status_code == 201
    sid = r.json()["id"]
    doc = client.get(f"/api/sessions/{sid}/export").json()
    assert doc["template_graph"] == "template"
    assert doc["decisions"]
    assert doc["format"] == "tgmatch-session/1"


def test_compare_endpoint(client):
    upload(client, "template")
    upload(client, "same")
    upload(client, "thin", edges=THINNED_EDGES)
    r = client.post("/api/compare", json={
        "template": "template", "candidates": ["same", "thin"]})
    assert r.status_code == 200
    ranking = r.json()["ranking"]
    assert ranking[0]["candidate"] == "same"
    assert ranking[0]["score"] == pytest.approx(1.0, abs=1e-9)
    assert ranking[1]["candidate"] == "thin"


def test_unknown_session_404(client):
    assert client.get("/api/sessions/ghost").status_code == 404
