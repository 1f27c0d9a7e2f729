import json

import pytest
from fastapi.testclient import TestClient

from qmop.service.app import app

client = TestClient(app)

REFERENCE = {"p": "3/2", "N": 8, "alpha0": 1, "alphas": [0, 9], "n": [2, 1]}


def test_health():
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_construct_reference():
    resp = client.post("/construct", json=REFERENCE)
    assert resp.status_code == 200
    body = resp.json()
    assert body["equal"] is True
    assert body["degree"] == 3
    assert body["moments_coefficients"] == body["rodrigues_coefficients"]
    assert body["moments_coefficients"][-1] == "1"
    assert body["conventions"]["weight_slot"] == "alpha_i_with_s"


def test_construct_zero_index():
    resp = client.post("/construct", json={**REFERENCE, "n": [0, 0]})
    assert resp.status_code == 200
    assert resp.json()["moments_coefficients"] == ["1"]


def test_construct_inadmissible_is_422():
    resp = client.post("/construct", json={**REFERENCE, "alphas": [0, 2]})
    assert resp.status_code == 422
    assert "alpha" in resp.json()["detail"]


def test_construct_rejects_bad_p():
    resp = client.post("/construct", json={**REFERENCE, "p": "1"})
    assert resp.status_code == 422
    resp = client.post("/construct", json={**REFERENCE, "p": "x"})
    assert resp.status_code == 422


@pytest.mark.parametrize("suite", ["orthogonality", "lowering", "ode", "third-order"])
def test_verify_suites_pass(suite):
    resp = client.post("/verify", json={"instance": REFERENCE, "suite": suite})
    assert resp.status_code == 200
    body = resp.json()
    assert body["pass"] is True
    assert "conventions" in body


def test_verify_raising_applicable_instance():
    instance = {"p": "3/2", "N": 8, "alpha0": 1, "alphas": [1, 10], "n": [1, 0]}
    resp = client.post("/verify", json={"instance": instance, "suite": "raising"})
    assert resp.status_code == 200
    assert resp.json()["pass"] is True


def test_verify_raising_not_applicable_is_422():
    resp = client.post("/verify", json={"instance": {**REFERENCE, "alpha0": 0}, "suite": "raising"})
    assert resp.status_code == 422


def test_verify_third_order_requires_r2():
    instance = {"p": "2", "N": 6, "alpha0": 1, "alphas": [2], "n": [2]}
    resp = client.post("/verify", json={"instance": instance, "suite": "third-order"})
    assert resp.status_code == 422


def test_verify_classical_r1():
    instance = {"p": "2", "N": 6, "alpha0": 1, "alphas": [2], "n": [3]}
    resp = client.post("/verify", json={"instance": instance, "suite": "classical"})
    assert resp.status_code == 200
    assert resp.json()["pass"] is True


def test_verify_all_aggregates():
    resp = client.post("/verify", json={"instance": REFERENCE, "suite": "all"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["pass"] is True
    assert body["suite"] == "all"
    assert "orthogonality" in body["residuals"]
    assert "high-order-equation" in body["residuals"]


def test_verify_unknown_suite_is_422():
    resp = client.post("/verify", json={"instance": REFERENCE, "suite": "nope"})
    assert resp.status_code == 422


def test_xi_endpoint():
    resp = client.post("/xi", json=REFERENCE)
    assert resp.status_code == 200
    body = resp.json()
    assert body["sum_rule_ok"] is True
    assert body["closed_form_match"] is True
    assert len(body["xi_solved"]) == 2


def test_xi_degenerate_is_409():
    resp = client.post("/xi", json={"p": "3/2", "N": 2, "alpha0": 0, "alphas": [0, 2], "n": [2, 1]})
    assert resp.status_code in (409, 422)  # degenerate or inadmissible, never 200
    resp = client.post("/det-a", json={"p": "3/2", "N": 4, "alpha0": 0, "alphas": [0, 2], "n": [2, 1]})
    assert resp.status_code == 409
    assert "degenerate" in resp.json()["detail"]


def test_det_a_endpoint():
    resp = client.post("/det-a", json=REFERENCE)
    assert resp.status_code == 200
    body = resp.json()
    assert body["equal"] is True
    assert body["det_closed"] == body["det_bruteforce"]


def test_limits_q1_endpoint():
    resp = client.post(
        "/limits",
        json={"instance": REFERENCE, "study": "q1", "sweep": [1e-2, 1e-3, 1e-4]},
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["pass"] is True
    assert abs(body["slope"] - 1.0) < 0.2


def test_limits_jacobi_endpoint():
    instance = {"p": "3/2", "N": 8, "alpha0": 1, "alphas": [0, 2], "n": [1, 1]}
    resp = client.post("/limits", json={"instance": instance, "study": "jacobi", "sweep": [50, 100, 200]})
    assert resp.status_code == 200
    assert resp.json()["pass"] is True


def test_limits_empty_sweep_is_422():
    resp = client.post("/limits", json={"instance": REFERENCE, "study": "q1", "sweep": []})
    assert resp.status_code == 422


def test_report_determinism_modulo_timing():
    def strip(payload):
        return json.dumps({k: v for k, v in payload.items() if k != "timing_s"}, sort_keys=True)

    a = client.post("/verify", json={"instance": REFERENCE, "suite": "ode"}).json()
    b = client.post("/verify", json={"instance": REFERENCE, "suite": "ode"}).json()
    assert strip(a) == strip(b)
