import pytest
from fastapi.testclient import TestClient

from scatterlab import __version__
from scatterlab.main import app


@pytest.fixture
def client() -> TestClient:
    return TestClient(app)


def test_health(client):
    response = client.get("/api/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok", "version": __version__}


def test_critical_table(client):
    response = client.post("/api/critical", json={"count": 1})
    assert response.status_code == 200
    table = response.json()["table"]
    assert table["columns"] == ["n", "s1/2(+)", "s1/2(-)", "p1/2(+)", "p1/2(-)"]
    assert table["rows"][0][1:] == pytest.approx([5.27, 1.11, 4.30, 2.30], abs=0.01)


def test_phase_shift_curve(client):
    response = client.post("/api/phase-shift", json={"depth": 3.0, "start": 1.1, "stop": 3.0, "points": 20})
    assert response.status_code == 200
    payload = response.json()
    assert payload["table"]["columns"][0] == "E"
    assert len(payload["table"]["rows"]) == 20
    assert payload["peaks"]["columns"][0] == "E_R"


def test_invalid_range_is_bad_request(client):
    response = client.post("/api/phase-shift", json={"start": 2.0, "stop": 1.5})
    assert response.status_code == 400
    assert "from/to" in response.json()["detail"]


def test_request_validation(client):
    response = client.post("/api/phase-shift", json={"start": 1.5, "stop": 2.0, "points": 1})
    assert response.status_code == 422


def test_failed_scan_points_are_null(client, monkeypatch):
    monkeypatch.setenv("MAGNITUDE_CAP", "1e-3")
    response = client.post(
        "/api/resonance-scan",
        json={"shape": "gaussian", "depth": 2.0, "scan": "p", "start": 0.5, "stop": 1.0, "points": 2},
    )
    assert response.status_code == 200
    assert all(row[1] is None for row in response.json()["table"]["rows"])


def test_numerical_failure_maps_to_422(client, monkeypatch):
    monkeypatch.setenv("CRITICAL_MAX_COUPLING", "3")
    response = client.post("/api/critical", json={"count": 3})
    assert response.status_code == 422
    assert "raices" in response.json()["detail"]
