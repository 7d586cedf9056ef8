"""
Модуль командной строки: сценарии, подкоманды, критерии приёмки
"""

from .main import RunManifest, build_parser, main
from .scenario import ScenarioConfig, load_scenario
from .validation import CriterionResult, run_validation, write_report

__all__ = [
    'RunManifest', 'build_parser', 'main',
    'ScenarioConfig', 'load_scenario',
    'CriterionResult', 'run_validation', 'write_report',
]
