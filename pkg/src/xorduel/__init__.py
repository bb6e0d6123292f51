"""
xorduel - XOR 非局域游戏与 XOR* 顺序游戏求解器

计算两类游戏的经典值与量子值，实现二者量子策略之间的对偶映射，
并检查重置门引起的量子优势激活。
"""

__version__ = "0.1.0"
__author__ = "xorduel developers"
