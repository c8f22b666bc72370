"""HTTP service: route contracts, report schema, and structured errors."""

from fastapi.testclient import TestClient

from germflow.service import app

client = TestClient(app)

MAIN = "-(x - (1/tau)*y^2*z^5) d/dx - 3*y d/dy + z d/dz"


def test_health():
    resp = client.get("/v1/health")
    assert resp.status_code == 200
    body = resp.json()
    assert body["status"] == "ok"
    assert body["version"]


def test_analyze_route():
    resp = client.post("/v1/analyze", json={"expr": MAIN})
    assert resp.status_code == 200
    body = resp.json()
    assert body["verdict"] == "NoFirstIntegral"
    assert body["holonomy"] == ["x1 + x2^2", "x2"]
    assert body["condition_star"] is True
    assert body["period"] is None


def test_analyze_matches_cli_schema():
    resp = client.post("/v1/analyze", json={"expr": "-x d/dx - 3*y d/dy + z d/dz"})
    body = resp.json()
    expected_keys = {
        "input",
        "order",
        "eigenvalues",
        "condition_star",
        "distinguished_axis",
        "holonomy",
        "period",
        "first_integrals",
        "flag_checks",
        "result",
        "verdict",
        "notes",
        "version",
    }
    assert set(body) == expected_keys
    assert body["first_integrals"] == ["x*z", "y*z^3"]


def test_holonomy_route():
    # order must cover the degree 7 coupling term, the default 8 does
    resp = client.post("/v1/holonomy", json={"expr": MAIN})
    assert resp.status_code == 200
    body = resp.json()
    assert body["holonomy"] == ["x1 + x2^2", "x2"]
    assert body["distinguished_axis"] == 2


def test_blowup_route():
    resp = client.post(
        "/v1/blowup", json={"expr": "(x + y^2, y)", "chart": "t_x", "order": 6}
    )
    assert resp.status_code == 200
    result = resp.json()["result"]
    assert result["components"] == ["t - t^3*x", "x + t^2*x^2"]


def test_exp_and_log_routes():
    resp = client.post("/v1/exp", json={"expr": "y^2 d/dx", "order": 6})
    assert resp.status_code == 200
    assert resp.json()["result"]["components"] == ["x + y^2", "y"]

    resp = client.post("/v1/log", json={"expr": "(x + y^2, y)", "order": 6})
    assert resp.status_code == 200
    assert resp.json()["result"]["components"] == ["y^2", "0"]


def test_period_route():
    resp = client.post("/v1/period", json={"expr": "(i*x, -y)", "pmax": 12})
    assert resp.status_code == 200
    assert resp.json()["period"] == 4


def test_orbit_route():
    resp = client.post(
        "/v1/orbit", json={"expr": "(x + y^2, y)", "start": "0, 1/2", "radius": "1"}
    )
    assert resp.status_code == 200
    assert resp.json()["result"]["count"] == 9


def test_euclid_route():
    resp = client.post("/v1/euclid", json={"p": [1, 1, 2], "q": [1, 3, 5]})
    assert resp.status_code == 200
    result = resp.json()["result"]
    assert result["result"] == "mixed"
    assert result["weights"] == [-1, 1, 1]


def test_flagcheck_route():
    resp = client.post(
        "/v1/flagcheck",
        json={
            "expr": "-2*x d/dx - 3*y d/dy + z d/dz",
            "form": "3*y dx - 2*x dy",
        },
    )
    assert resp.status_code == 200
    assert resp.json()["flag_checks"] == {
        "interior_vanishes": True,
        "frobenius": True,
        "kupka": True,
    }


def test_parse_error_is_400_with_position():
    resp = client.post("/v1/analyze", json={"expr": "x + * y"})
    assert resp.status_code == 400
    body = resp.json()
    assert body["error"]["type"] == "ParseError"
    assert body["error"]["line"] == 1
    assert body["error"]["column"] == 5
    assert body["version"]


def test_domain_error_is_400():
    resp = client.post(
        "/v1/holonomy", json={"expr": "x d/dx + 3*y d/dy + z d/dz"}
    )
    assert resp.status_code == 400
    body = resp.json()
    assert body["error"]["type"] == "NotStarGerm"


def test_bad_chart_is_400():
    resp = client.post(
        "/v1/blowup", json={"expr": "(x + y^2, y)", "chart": "bogus"}
    )
    assert resp.status_code == 400


def test_missing_field_is_422():
    resp = client.post("/v1/analyze", json={})
    assert resp.status_code == 422
