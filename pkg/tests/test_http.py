"""
HTTP 接口：公开接口、参数校验、访问密码、会话运行
"""
import asyncio
import json
import warnings

import pytest
from aiohttp import web
from aiohttp.test_utils import TestClient, TestServer

from http_server import LabHTTPServer
from http_server.app_keys import LAB_MANAGER_KEY
from qkd_session import LabManager, LabSettings


@pytest.fixture
def app():
    """每次请求新建应用（aiohttp 应用启动后不能复用），LabManager 单例在测试间重置"""
    LabManager.reset()
    yield lambda: LabHTTPServer(host="127.0.0.1").app
    LabManager.reset()


def _request(app, method, path, **kwargs):
    async def go():
        async with TestClient(TestServer(app())) as client:
            resp = await client.request(method, path, **kwargs)
            if resp.content_type == "application/json":
                return resp.status, await resp.json()
            return resp.status, await resp.text()
    return asyncio.run(go())


def test_index_and_ping(app):
    status, body = _request(app, "GET", "/")
    assert status == 200
    assert "/api/session/run" in body

    status, body = _request(app, "GET", "/public/ping")
    assert status == 200
    assert body["status"] == "alive"


def test_health_reports_lab_status(app):
    status, body = _request(app, "GET", "/health")
    assert status == 200
    assert body["lab"]["sessions_run"] == 0
    assert body["lab"]["busy"] is False


def test_css_rate(app):
    status, body = _request(app, "GET", "/api/rates/css", params={"e_b": "0", "e_p": "0"})
    assert status == 200
    assert body["data"]["rate"] == pytest.approx(1.0)

    status, body = _request(app, "GET", "/api/rates/css", params={"e_b": "0.1"})
    assert status == 400
    assert body["success"] is False


def test_rate_table(app):
    status, body = _request(app, "GET", "/api/rates/table", params={"loss_db": "0"})
    assert status == 200
    assert body["data"][0]["loss_db"] == 0.0

    status, _ = _request(app, "GET", "/api/rates/table", params={"loss_db": "0.5"})
    assert status == 400

    status, _ = _request(app, "GET", "/api/rates/table", params={"loss_db": "0", "convention": "half"})
    assert status == 400


def test_rate_table_conventions_differ(app):
    _, total = _request(app, "GET", "/api/rates/table", params={"loss_db": "0.4"})
    _, signal = _request(app, "GET", "/api/rates/table", params={"loss_db": "0.4", "convention": "signal"})
    # 总方差读法的信号方差更小，误码更高
    assert total["data"][0]["e_b1"] > signal["data"][0]["e_b1"]


def test_app_registers_manager_under_typed_key():
    LabManager.reset()
    with warnings.catch_warnings():
        warnings.simplefilter("error", web.NotAppKeyWarning)
        server = LabHTTPServer(host="127.0.0.1")
    assert server.app[LAB_MANAGER_KEY] is LabManager.instance()
    LabManager.reset()


def test_threshold(app):
    status, body = _request(app, "GET", "/api/threshold")
    assert status == 200
    assert body["data"]["critical_error"] == pytest.approx(0.110028, abs=1e-5)

    status, _ = _request(app, "GET", "/api/threshold", params={"model": "nope"})
    assert status == 400


def test_estimator_demo_limits(app):
    status, _ = _request(app, "GET", "/api/estimator/demo", params={"samples": "999999999"})
    assert status == 400


def test_session_run_requires_password(app, monkeypatch):
    monkeypatch.setattr(LabSettings, "ACCESS_PASSWORD", "")
    status, body = _request(app, "POST", "/api/session/run", json={})
    assert status == 401

    status, _ = _request(app, "POST", "/api/session/run", json={},
                         headers={"X-Access-Password": "anything"})
    assert status == 401

    monkeypatch.setattr(LabSettings, "ACCESS_PASSWORD", "secret")
    status, _ = _request(app, "POST", "/api/session/run", json={},
                         headers={"X-Access-Password": "wrong"})
    assert status == 401


def test_session_run_bad_config(app, monkeypatch):
    monkeypatch.setattr(LabSettings, "ACCESS_PASSWORD", "secret")
    status, body = _request(app, "POST", "/api/session/run", json={"n_keys": 10},
                            headers={"X-Access-Password": "secret"})
    assert status == 400
    assert "n_keys" in body["error"]


def test_session_run(app, monkeypatch, config_dir):
    monkeypatch.setattr(LabSettings, "ACCESS_PASSWORD", "secret")
    data = json.loads((config_dir / "intercept_resend.json").read_text(encoding="utf-8"))
    status, body = _request(app, "POST", "/api/session/run", json=data,
                            headers={"X-Access-Password": "secret"})
    assert status == 200
    report = body["data"]
    assert report["exit_code"] == 2
    assert report["verdict"] == "abort-gate"
    assert report["transcript"][0]["kind"] == "permutation"
    assert LabManager.instance().get_status()["gate_aborts"] == 1


def test_monitor_health(app):
    status, body = _request(app, "GET", "/api/monitor/health")
    assert status == 200
    assert body["data"]["status"] in ("healthy", "degraded")
    assert "snapshot" in body["data"]
