"""
核心模块

配置、日志与错误处理。
"""
