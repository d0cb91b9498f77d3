#!/usr/bin/env python3
"""
LabManager - 会话调度单例
HTTP 请求与 CLI 共用；会话在工作线程中运行，不阻塞事件循环
同一时刻只跑一个会话（锁保证顺序）
"""

import asyncio
import logging
import time
from typing import Dict, Any, Optional

from .config import SessionConfig, ConfigError
from .session import run_session, transcript_summary
from .transcript import Transcript, to_jsonable

logger = logging.getLogger(__name__)


class LabManager:
    """会话调度：单例 + 锁 + 计数器"""

    _instance: Optional['LabManager'] = None

    def __new__(cls, *args, **kwargs):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    @classmethod
    def instance(cls) -> 'LabManager':
        if cls._instance is None:
            cls._instance = cls()
        return cls._instance

    @classmethod
    def reset(cls):
        """测试用：丢弃单例"""
        cls._instance = None

    def __init__(self):
        # 防止重复初始化
        if getattr(self, '_initialized', False):
            return

        self.session_lock = asyncio.Lock()
        self.counters = {
            'sessions_run': 0,
            'keys_distilled': 0,
            'gate_aborts': 0,
            'conditioning_aborts': 0,
            'errors': 0,
            'start_time': time.time(),
        }
        self.last_report: Optional[Dict[str, Any]] = None

        logger.info("✅ LabManager 初始化完成")
        self._initialized = True

    async def run(self, data: Dict[str, Any]) -> Dict[str, Any]:
        """
        解析配置并运行一次会话，返回报告字典（含 transcript 摘要）
        配置错误以 ConfigError 抛出，由调用方转成 HTTP 400
        """
        cfg = SessionConfig.from_dict(data)
        async with self.session_lock:
            transcript = Transcript()
            try:
                report = await asyncio.to_thread(run_session, cfg, transcript)
            except Exception as e:
                self.counters['errors'] += 1
                logger.error(f"会话失败: {e}")
                raise

        self.counters['sessions_run'] += 1
        if report.exit_code == 0:
            self.counters['keys_distilled'] += 1
        elif report.exit_code == 2:
            self.counters['gate_aborts'] += 1
        elif report.exit_code == 3:
            self.counters['conditioning_aborts'] += 1

        result = to_jsonable(report.to_dict())
        result["transcript"] = transcript_summary(transcript)
        self.last_report = result
        return result

    def get_status(self) -> Dict[str, Any]:
        uptime = time.time() - self.counters['start_time']
        return {
            "uptime_seconds": uptime,
            "busy": self.session_lock.locked(),
            "sessions_run": self.counters['sessions_run'],
            "keys_distilled": self.counters['keys_distilled'],
            "gate_aborts": self.counters['gate_aborts'],
            "conditioning_aborts": self.counters['conditioning_aborts'],
            "errors": self.counters['errors'],
            "last_exit_code": self.last_report["exit_code"] if self.last_report else None,
        }


__all__ = ['LabManager', 'ConfigError']
