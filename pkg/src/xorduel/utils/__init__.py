"""
工具模块

量子比特线性代数、数据验证与序列化。
"""
