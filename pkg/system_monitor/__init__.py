"""
系统状态监控模块
按需采集进程资源，不常驻运行
"""
from .collector import SystemMonitor

__version__ = "1.0.0"
__all__ = ['SystemMonitor']
