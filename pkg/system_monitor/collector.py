"""
进程资源采集器
按需采集，不保存历史数据；会话报告与 /api/monitor/health 共用
"""
import os
import time
import logging
from datetime import datetime
from typing import Dict, Any

import psutil

logger = logging.getLogger(__name__)

# 进程内存超过该值时健康检查给出警告
MEMORY_WARN_MB = 1024.0


class SystemMonitor:
    """进程资源监控 - 按需采集"""

    _process_start = time.time()

    def __init__(self):
        self.pid = os.getpid()
        self._process = psutil.Process(self.pid)

    def collect_light(self) -> Dict[str, Any]:
        """轻量快照：进程 RSS、CPU 占用、运行时长"""
        try:
            with self._process.oneshot():
                rss_mb = self._process.memory_info().rss / 1024 / 1024
                cpu_percent = self._process.cpu_percent(interval=None)
                threads = self._process.num_threads()
        except psutil.Error as e:
            logger.warning(f"⚠️ 资源采集失败: {e}")
            return {"timestamp": datetime.now().isoformat(), "error": str(e)}

        return {
            "timestamp": datetime.now().isoformat(),
            "pid": self.pid,
            "process_memory_mb": round(rss_mb, 2),
            "process_cpu_percent": cpu_percent,
            "num_threads": threads,
            "system_memory_percent": psutil.virtual_memory().percent,
            "uptime_seconds": round(time.time() - self._process_start, 3),
        }

    def check_health(self) -> Dict[str, Any]:
        """健康结论 + 快照"""
        snapshot = self.collect_light()
        warnings = []
        if "error" in snapshot:
            warnings.append(snapshot["error"])
        elif snapshot["process_memory_mb"] > MEMORY_WARN_MB:
            warnings.append(f"进程内存 {snapshot['process_memory_mb']:.0f} MB 超过 {MEMORY_WARN_MB:.0f} MB")
        return {
            "status": "healthy" if not warnings else "degraded",
            "warnings": warnings,
            "snapshot": snapshot,
        }
