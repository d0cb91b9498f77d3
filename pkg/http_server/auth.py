"""
HTTP API认证
访问密码来自 LabSettings.ACCESS_PASSWORD（环境变量 ACCESS_PASSWORD）
"""
import hmac
from functools import wraps

from aiohttp import web

from qkd_session.settings import LabSettings

# 不需要密码的路径
PUBLIC_PATHS = (
    '/',
    '/public/ping',
    '/health',
    '/api/monitor/health',
)


def _password_matches(provided: str) -> bool:
    expected = LabSettings.ACCESS_PASSWORD
    if not expected:
        return False
    return hmac.compare_digest(provided.encode('utf-8'), expected.encode('utf-8'))


def require_auth(func):
    """认证装饰器 - 基于HTTP Header的密码认证"""
    @wraps(func)
    async def wrapper(request):
        if request.path in PUBLIC_PATHS:
            return await func(request)

        provided_password = request.headers.get('X-Access-Password')
        if not provided_password:
            return web.json_response(
                {"success": False, "error": "缺少访问密码。请在请求头中使用: X-Access-Password"},
                status=401
            )

        if not _password_matches(provided_password):
            return web.json_response(
                {"success": False, "error": "访问密码无效"},
                status=401
            )

        return await func(request)

    return wrapper
