"""
Точка входа: python -m src.cli
"""
import sys

from .main import main

sys.exit(main())
