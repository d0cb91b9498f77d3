"""
应用级共享对象的类型化键
"""
from aiohttp import web

from qkd_session.lab_manager import LabManager

LAB_MANAGER_KEY = web.AppKey("lab_manager", LabManager)
