# HTTP服务模块
from .server import LabHTTPServer

__all__ = ['LabHTTPServer']
