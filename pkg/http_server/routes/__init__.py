"""
HTTP路由聚合模块
集中管理所有路由的导入和注册
"""
import logging

from aiohttp import web

from .main import setup_main_routes
from .lab import setup_lab_routes
from .monitor import setup_monitor_routes

logger = logging.getLogger(__name__)


def setup_routes(app: web.Application):
    """主路由设置函数 - 聚合所有模块"""
    logger.info("开始加载路由模块...")

    setup_main_routes(app)
    setup_lab_routes(app)
    setup_monitor_routes(app)

    logger.info("=" * 60)
    logger.info("✅ 所有路由模块加载完成")
    logger.info(f"📊 总路由数: {len(app.router.routes())}")
    logger.info("   - 基础接口: /, /health, /public/ping")
    logger.info("   - 实验接口: /api/rates/*, /api/threshold, /api/estimator/demo, /api/session/run")
    logger.info("   - 监控接口: /api/monitor/health")
    logger.info("=" * 60)
