"""
HTTP服务器 - 实验室服务
提供速率计算、阈值、估计器演示与会话运行接口
"""
import logging
from typing import Optional

from aiohttp import web

from qkd_session.settings import LabSettings
from qkd_session.lab_manager import LabManager
from .app_keys import LAB_MANAGER_KEY
from .routes import setup_routes

logger = logging.getLogger(__name__)


class LabHTTPServer:
    """aiohttp 应用 + AppRunner 生命周期"""

    def __init__(self, host: Optional[str] = None, port: Optional[int] = None):
        self.host = host or LabSettings.HOST
        self.port = port or LabSettings.PORT
        self.app = web.Application()
        self.runner: Optional[web.AppRunner] = None
        self.site: Optional[web.TCPSite] = None

        self.app[LAB_MANAGER_KEY] = LabManager.instance()
        setup_routes(self.app)

        self.app.on_startup.append(self.on_startup)
        self.app.on_cleanup.append(self.on_cleanup)

    async def on_startup(self, app):
        logger.info(f"✅ HTTP服务器已就绪，监听在 {self.host}:{self.port}")

    async def on_cleanup(self, app):
        logger.info("HTTP服务器清理完成")

    async def start(self):
        """启动HTTP服务器"""
        try:
            self.runner = web.AppRunner(self.app)
            await self.runner.setup()
            self.site = web.TCPSite(self.runner, self.host, self.port)
            await self.site.start()
            logger.info(f"✅ HTTP服务器已启动: http://{self.host}:{self.port}")
        except Exception as e:
            logger.error(f"启动HTTP服务器失败: {e}")
            raise

    async def shutdown(self):
        """优雅关闭"""
        logger.info("HTTP服务器关闭中...")
        if self.runner:
            await self.runner.cleanup()
        logger.info("HTTP服务器已关闭")
