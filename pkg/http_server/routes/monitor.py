"""
系统监控接口模块
"""
import logging

from aiohttp import web

from system_monitor.collector import SystemMonitor

logger = logging.getLogger(__name__)


async def get_system_health(request: web.Request) -> web.Response:
    """进程资源与健康结论（公开访问）"""
    try:
        data = SystemMonitor().check_health()
        return web.json_response({
            "success": True,
            "data": data
        })
    except Exception as e:
        logger.error(f"获取系统健康状态失败: {e}")
        return web.json_response({
            "success": False,
            "error": str(e)
        }, status=500)


def setup_monitor_routes(app: web.Application):
    """设置系统监控路由"""
    app.router.add_get('/api/monitor/health', get_system_health)

    logger.info("✅ 监控路由已加载: /api/monitor/health")
