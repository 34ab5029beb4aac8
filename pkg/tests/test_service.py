"""HTTP layer: request validation, execution wiring, error mapping."""

import asyncio
import json
from pathlib import Path

import httpx

from fairfedcs.service import create_app

SMALL_CONFIG = {
    "scenario": 1,
    "policy": "fairfedcs",
    "seed": 0,
    "n_clients": 10,
    "m": 2,
    "n_classes": 5,
    "feature_dim": 8,
    "samples_per_client": 100,
    "max_rounds": 3,
    "patience": 3,
}


def request(method, path, payload=None):
    async def _go():
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://testserver"
        ) as client:
            if method == "GET":
                return await client.get(path)
            return await client.post(path, json=payload)

    return asyncio.run(_go())


class TestHealth:
    def test_health_reports_version(self):
        response = request("GET", "/health")
        assert response.status_code == 200
        body = response.json()
        assert body["status"] == "ok"
        assert body["version"]


class TestRunEndpoint:
    def test_run_writes_artifacts_and_returns_summary(self, tmp_path):
        out = tmp_path / "run"
        response = request(
            "POST", "/run", {"config": SMALL_CONFIG, "out_dir": str(out)}
        )
        assert response.status_code == 200
        body = response.json()
        assert body["out_dir"] == str(out)
        assert [p.rsplit("/", 1)[-1] for p in body["files"]] == [
            "trace.csv",
            "rounds.csv",
            "summary.json",
        ]
        for path in body["files"]:
            assert Path(path).is_file()
        summary = body["summary"]
        assert 0 < summary["jfi"] <= 1
        assert summary["rounds_executed"] == 3
        assert len(summary["participation"]) == 10
        written = json.loads((out / "summary.json").read_text())
        assert written["jfi"] == summary["jfi"]

    def test_invalid_config_value_maps_to_400(self, tmp_path):
        config = {**SMALL_CONFIG, "policy": "roundrobin"}
        response = request(
            "POST", "/run", {"config": config, "out_dir": str(tmp_path / "x")}
        )
        assert response.status_code == 400
        assert "policy" in response.json()["detail"]

    def test_unknown_config_key_maps_to_422(self, tmp_path):
        config = {**SMALL_CONFIG, "bogus": 1}
        response = request(
            "POST", "/run", {"config": config, "out_dir": str(tmp_path / "x")}
        )
        assert response.status_code == 422

    def test_execution_failure_maps_to_500(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("in the way")
        response = request(
            "POST", "/run", {"config": SMALL_CONFIG, "out_dir": str(blocker / "sub")}
        )
        assert response.status_code == 500
        assert "run failed" in response.json()["detail"]


class TestSweepEndpoint:
    def test_sweep_runs_grid_and_aggregates(self, tmp_path):
        out = tmp_path / "sweep"
        response = request(
            "POST",
            "/sweep",
            {
                "config": SMALL_CONFIG,
                "policies": ["fairfedcs", "random"],
                "seeds": [0, 1],
                "out_dir": str(out),
            },
        )
        assert response.status_code == 200
        body = response.json()
        assert len(body["cells"]) == 4
        assert (out / "sweep.csv").is_file()
        for cell in body["cells"]:
            assert cell["policy"] in ("fairfedcs", "random")
            assert (out / cell["policy"] / f"seed_{cell['seed']}" / "trace.csv").is_file()

    def test_unknown_policy_in_grid_maps_to_400(self, tmp_path):
        response = request(
            "POST",
            "/sweep",
            {
                "config": SMALL_CONFIG,
                "policies": ["fairfedcs", "mystery"],
                "seeds": [0],
                "out_dir": str(tmp_path / "sweep"),
            },
        )
        assert response.status_code == 400
        assert "mystery" in response.json()["detail"]

    def test_empty_seed_list_maps_to_400(self, tmp_path):
        response = request(
            "POST",
            "/sweep",
            {
                "config": SMALL_CONFIG,
                "policies": ["fairfedcs"],
                "seeds": [],
                "out_dir": str(tmp_path / "sweep"),
            },
        )
        assert response.status_code == 400


class TestReportEndpoint:
    def test_report_builds_from_sweep(self, tmp_path):
        sweep_out = tmp_path / "sweep"
        request(
            "POST",
            "/sweep",
            {
                "config": SMALL_CONFIG,
                "policies": ["fairfedcs"],
                "seeds": [0],
                "out_dir": str(sweep_out),
            },
        )
        report_out = tmp_path / "report"
        response = request(
            "POST",
            "/report",
            {"sweep_dir": str(sweep_out), "out_dir": str(report_out)},
        )
        assert response.status_code == 200
        names = {p.rsplit("/", 1)[-1] for p in response.json()["files"]}
        assert "table.txt" in names
        assert (report_out / "table.txt").is_file()

    def test_missing_sweep_maps_to_400(self, tmp_path):
        response = request(
            "POST",
            "/report",
            {"sweep_dir": str(tmp_path / "missing"), "out_dir": str(tmp_path / "out")},
        )
        assert response.status_code == 400
