"""
POT: частично перекрывающиеся поднесущие
Модуль моделирования многочастотных сигналов с намеренным сдвигом несущей
"""

__version__ = "0.1.0"
