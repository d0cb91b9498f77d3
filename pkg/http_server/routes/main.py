"""
基础路由模块
处理根路径、健康检查、公开接口等
"""
import datetime
import logging

from aiohttp import web

from ..app_keys import LAB_MANAGER_KEY

logger = logging.getLogger(__name__)

INDEX_PAGE = """<!DOCTYPE html>
<html><head><meta charset="utf-8"><title>CV-QKD Lab</title></head>
<body>
<h1>CV-QKD 实验室服务</h1>
<ul>
<li>GET  /api/rates/css?e_b=&amp;e_p=</li>
<li>GET  /api/rates/table?loss_db=0,0.4</li>
<li>GET  /api/threshold?model=symmetric-erfc</li>
<li>GET  /api/estimator/demo?loss_db=1.0&amp;samples=20000&amp;seed=1</li>
<li>POST /api/session/run  (X-Access-Password)</li>
<li>GET  /api/monitor/health</li>
</ul>
</body></html>
"""


async def root_handler(request: web.Request) -> web.Response:
    """根路径：接口清单"""
    return web.Response(text=INDEX_PAGE, content_type='text/html')


async def public_ping(request: web.Request) -> web.Response:
    """完全公开的存活检查，只返回最简单的状态"""
    data = {
        "status": "alive",
        "timestamp": datetime.datetime.now().isoformat()
    }
    return web.json_response(data, status=200)


async def health_check(request: web.Request) -> web.Response:
    manager = request.app.get(LAB_MANAGER_KEY)
    status_info = {
        "status": "ok",
        "service": "cvqkd-lab",
        "lab": manager.get_status() if manager else None,
        "timestamp": datetime.datetime.now().isoformat()
    }
    return web.json_response(status_info, status=200)


def setup_main_routes(app: web.Application):
    """设置基础路由"""
    app.router.add_get('/', root_handler)
    app.router.add_get('/public/ping', public_ping)
    app.router.add_get('/health', health_check)

    logger.info("✅ 基础路由已加载: /, /health, /public/ping")
