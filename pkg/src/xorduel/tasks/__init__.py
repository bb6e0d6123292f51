"""
任务执行模块

优化重启的并行执行。
"""
