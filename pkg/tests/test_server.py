import json

import pytest
from fastapi.testclient import TestClient

from ratiomem.cli import main as cli_main
from ratiomem.serialize import params_to_dict
from ratiomem.server import create_app
from conftest import preset


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def preset_body(r=13.0, alpha=1.0, **extra):
    body = params_to_dict(preset(r=r, alpha=alpha))
    body.update(extra)
    return body


class TestBasics:
    def test_healthz(self, client):
        resp = client.get("/healthz")
        assert resp.status_code == 200
        assert resp.text == "ok"

    def test_presets(self, client):
        resp = client.get("/api/presets")
        assert resp.status_code == 200
        doc = resp.json()["presets"]["paper-example"]
        assert doc["K"] == 0.1 and len(doc["predators"]) == 2

    def test_schema_served(self, client):
        resp = client.get("/api/schema")
        assert resp.status_code == 200
        assert "paths" in resp.json()


class TestEndpoints:
    def test_stability_robust_case(self, client):
        resp = client.post("/api/stability", json=preset_body(r=13.0))
        assert resp.status_code == 200
        doc = resp.json()
        assert doc["report"]["delay_robust"]["holds"] is True
        assert doc["report"]["classification"] == "delay-robust"
        assert doc["applicability"]["failed_conditions"] == []

    def test_stability_names_failed_conditions(self, client):
        resp = client.post("/api/stability", json=preset_body(r=7.0))
        assert resp.status_code == 200
        failed = resp.json()["applicability"]["failed_conditions"]
        assert any("sign stability" in c for c in failed)
        assert any("Routh-Hurwitz" in c for c in failed)

    def test_equilibrium_no_solution_is_422(self, client):
        resp = client.post("/api/equilibrium", json=preset_body(r=5.0))
        assert resp.status_code == 422
        doc = resp.json()
        assert doc["code"] == "no_positive_equilibrium"
        assert "r > sum_i d_i u_i*" in doc["paper_condition"]

    def test_validation_is_400(self, client):
        body = preset_body()
        body["predators"] = []
        resp = client.post("/api/stability", json=body)
        assert resp.status_code == 400
        assert resp.json()["code"] == "validation"

    def test_jacobian(self, client):
        resp = client.post("/api/jacobian", json=preset_body(r=13.0))
        assert resp.status_code == 200
        assert resp.json()["jacobians"]["A"]["matrix"][0] == [-5.0, -4.0, -8.0]

    def test_hcurve(self, client):
        resp = client.post("/api/hcurve", json=preset_body(
            r=7.0, alpha_min=0.5, alpha_max=20.0, points=40))
        assert resp.status_code == 200
        doc = resp.json()["scan"]
        assert len(doc["alphas"]) == 40
        assert len(doc["switch_points"]) == 1

    def test_simulate(self, client):
        resp = client.post("/api/simulate", json=preset_body(
            r=13.0, t_end=5.0, samples=21, perturb=0.1))
        assert resp.status_code == 200
        doc = resp.json()["trajectory"]
        assert len(doc["times"]) == 21
        assert doc["delayed"] is True

    def test_simulate_sample_cap(self, client):
        resp = client.post("/api/simulate", json=preset_body(
            r=13.0, samples=100_001))
        assert resp.status_code == 400

    def test_simulate_explicit_initial(self, client):
        resp = client.post("/api/simulate", json=preset_body(
            r=13.0, t_end=1.0, samples=5,
            initial=[0.05, 0.01, 0.01, 0.05]))
        assert resp.status_code == 200
        assert resp.json()["trajectory"]["states"][0] == [0.05, 0.01, 0.01, 0.05]

    def test_nullcline(self, client):
        resp = client.post("/api/nullcline", json=preset_body(
            r=10.0, alpha=None, grid=5))
        assert resp.status_code == 200
        assert len(resp.json()["nullcline"]["roots"]) == 5


class TestSharedCore:
    def test_response_bytes_match_cli_artifact(self, client, tmp_path, capsys):
        for command, endpoint in (("stability", "/api/stability"),
                                  ("equilibrium", "/api/equilibrium"),
                                  ("jacobian", "/api/jacobian")):
            path = tmp_path / f"{command}.json"
            code = cli_main([command, "--preset", "paper-example", "--r", "13",
                             "--alpha", "1", "--no-meta", "--out", str(path)])
            capsys.readouterr()
            assert code == 0
            resp = client.post(endpoint, json=preset_body(r=13.0))
            assert resp.content == path.read_bytes().rstrip(b"\n")

    def test_statelessness_order_independent(self, client):
        first = client.post("/api/stability", json=preset_body(r=13.0)).content
        client.post("/api/stability", json=preset_body(r=7.0))
        client.post("/api/equilibrium", json=preset_body(r=9.0))
        again = client.post("/api/stability", json=preset_body(r=13.0)).content
        assert first == again
