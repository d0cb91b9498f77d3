"""
实验接口模块
速率、表格、阈值、估计器演示（公开）与会话运行（需要密码）
"""
import asyncio
import logging

from aiohttp import web

from core_math.conventions import DomainError
from key_rates.css import css_rate
from key_rates.published import MODULATION_CONVENTIONS, TABLE_CONVENTION, TABLE_DECODE, TABLE_LABELING
from key_rates.table_report import build_table_rows, TableError, DEFAULT_LOSSES
from key_rates.threshold import solve_threshold, ThresholdError
from phase_estimator.demo import run_estimator_demo
from phase_estimator.probes import ProbeDesignError
from qkd_session.config import ConfigError
from qkd_session.lab_manager import LabManager
from qkd_session.transcript import to_jsonable
from ..app_keys import LAB_MANAGER_KEY
from ..auth import require_auth

logger = logging.getLogger(__name__)

# 演示接口每个探针的拷贝数上限
MAX_DEMO_SAMPLES = 200000


def _error(message: str, status: int = 400) -> web.Response:
    return web.json_response({"success": False, "error": message}, status=status)


def _float_param(request: web.Request, name: str, default=None) -> float:
    raw = request.query.get(name)
    if raw is None:
        if default is None:
            raise ValueError(f"缺少参数 {name}")
        return default
    return float(raw)


async def get_css_rate(request: web.Request) -> web.Response:
    """1 - h(e_b) - h(e_p)"""
    try:
        e_b = _float_param(request, "e_b")
        e_p = _float_param(request, "e_p")
        rate = css_rate(e_b, e_p)
    except ValueError as e:
        return _error(str(e))
    return web.json_response({"success": True, "data": {"e_b": e_b, "e_p": e_p, "rate": rate}})


async def get_rate_table(request: web.Request) -> web.Response:
    """两切片速率表（e_p 取已发表常数）"""
    try:
        raw = request.query.get("loss_db")
        losses = [float(v) for v in raw.split(",") if v.strip()] if raw else list(DEFAULT_LOSSES)
        decode = request.query.get("decode", TABLE_DECODE)
        labeling = request.query.get("labeling", TABLE_LABELING)
        convention = request.query.get("convention", TABLE_CONVENTION)
        if convention not in MODULATION_CONVENTIONS:
            raise TableError(f"未知调制方差读法: {convention}")
        v_mod = MODULATION_CONVENTIONS[convention]
        rows = await asyncio.to_thread(build_table_rows, losses, "paper", decode, labeling, v_mod)
    except (ValueError, TableError) as e:
        return _error(str(e))
    return web.json_response({"success": True, "data": to_jsonable(rows)})


async def get_threshold(request: web.Request) -> web.Response:
    model = request.query.get("model", "symmetric-erfc")
    try:
        result = await asyncio.to_thread(solve_threshold, model)
    except ThresholdError as e:
        return _error(str(e))
    return web.json_response({"success": True, "data": result.to_dict()})


async def get_estimator_demo(request: web.Request) -> web.Response:
    try:
        loss_db = _float_param(request, "loss_db", 1.0)
        samples = int(request.query.get("samples", 20000))
        cutoff = int(request.query.get("cutoff", 2))
        seed = int(request.query["seed"]) if "seed" in request.query else None
        if not 1 <= samples <= MAX_DEMO_SAMPLES:
            raise ValueError(f"samples 必须在 1..{MAX_DEMO_SAMPLES}")
        result = await asyncio.to_thread(run_estimator_demo, loss_db, samples, cutoff, seed=seed)
    except (ValueError, DomainError, ProbeDesignError) as e:
        return _error(str(e))
    return web.json_response({"success": True, "data": to_jsonable(result)})


@require_auth
async def post_session_run(request: web.Request) -> web.Response:
    """运行一次会话，body 为会话配置 JSON"""
    try:
        data = await request.json()
    except ValueError:
        return _error("请求体不是合法的 JSON")

    manager: LabManager = request.app.get(LAB_MANAGER_KEY) or LabManager.instance()
    try:
        report = await manager.run(data)
    except ConfigError as e:
        return _error(str(e))
    except Exception as e:
        logger.error(f"会话运行失败: {e}")
        return _error(str(e), status=500)
    return web.json_response({"success": True, "data": report})


def setup_lab_routes(app: web.Application):
    app.router.add_get('/api/rates/css', get_css_rate)
    app.router.add_get('/api/rates/table', get_rate_table)
    app.router.add_get('/api/threshold', get_threshold)
    app.router.add_get('/api/estimator/demo', get_estimator_demo)
    app.router.add_post('/api/session/run', post_session_run)

    logger.info("✅ 实验路由已加载: /api/rates/css, /api/rates/table, /api/threshold, "
                "/api/estimator/demo, /api/session/run")
