"""
实验室进程级设置：从环境变量读取（先加载 .env）
"""
import os
from typing import List

from dotenv import load_dotenv

load_dotenv()


def _int_env(name: str, default: int) -> int:
    try:
        return int(os.environ.get(name, default))
    except ValueError:
        return default


class LabSettings:
    """配置管理"""

    # HTTP 服务
    PORT = _int_env("PORT", 10000)
    HOST = os.environ.get("LAB_HOST", "0.0.0.0")

    # /api/session/run 的访问密码，未设置则该接口拒绝一切请求
    ACCESS_PASSWORD = os.environ.get("ACCESS_PASSWORD", "")

    # 日志
    LOG_LEVEL = os.environ.get("LAB_LOG_LEVEL", "INFO").upper()

    # 会话默认种子与规模上限
    DEFAULT_SEED = _int_env("LAB_DEFAULT_SEED", 20240601)
    MAX_OSCILLATORS = _int_env("LAB_MAX_OSCILLATORS", 2_000_000)

    @classmethod
    def reload(cls):
        """重新读取环境变量（测试中用 monkeypatch 改环境后调用）"""
        cls.PORT = _int_env("PORT", 10000)
        cls.HOST = os.environ.get("LAB_HOST", "0.0.0.0")
        cls.ACCESS_PASSWORD = os.environ.get("ACCESS_PASSWORD", "")
        cls.LOG_LEVEL = os.environ.get("LAB_LOG_LEVEL", "INFO").upper()
        cls.DEFAULT_SEED = _int_env("LAB_DEFAULT_SEED", 20240601)
        cls.MAX_OSCILLATORS = _int_env("LAB_MAX_OSCILLATORS", 2_000_000)

    @classmethod
    def validate_config(cls) -> List[str]:
        """返回问题列表，空列表表示配置可用"""
        problems = []
        if not 0 < cls.PORT < 65536:
            problems.append(f"PORT 超出范围: {cls.PORT}")
        if cls.LOG_LEVEL not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            problems.append(f"未知日志级别: {cls.LOG_LEVEL}")
        if cls.MAX_OSCILLATORS < 1:
            problems.append(f"LAB_MAX_OSCILLATORS 必须为正: {cls.MAX_OSCILLATORS}")
        if not cls.ACCESS_PASSWORD:
            problems.append("⚠️ 未设置 ACCESS_PASSWORD，/api/session/run 将不可用")
        return problems
