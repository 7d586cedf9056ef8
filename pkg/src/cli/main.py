"""
Командная строка: таблицы Ψ(τ, ε), кривые компромисса, кривые BER, критерии приёмки
"""
import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, ValidationError

from .scenario import DEFAULT_AXIS_VALUES, ScenarioConfig, load_scenario
from .validation import report_frame, run_validation, write_report
from .. import __version__
from ..analysis.ber import ModQam, agreement, ber_curve
from ..interference.gains import gain_table
from ..interference.tradeoff import tradeoff_sweep
from ..montecarlo.link import ber_sweep
from ..utils.config import Config
from ..utils.exceptions import PotError, UsageError
from ..utils.io import write_csv
from ..utils.logger import setup_logger

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

Outcome = Tuple[Optional[Path], List[str], bool]


class RunManifest(BaseModel):
    """Описание запуска, записываемое рядом с каждым выходным файлом"""
    command: str = Field(..., description="Подкоманда")
    config_path: Optional[str] = Field(None, description="Файл сценария")
    output_path: Optional[str] = Field(None, description="Выходной файл")
    seed: int = Field(..., ge=0, description="Зерно генератора")
    tool_version: str = Field(__version__, description="Версия пакета")
    duration_s: float = Field(..., ge=0, description="Время выполнения, с")
    parameters: Dict[str, Any] = Field(default_factory=dict, description="Итоговые параметры сценария")
    warnings: List[str] = Field(default_factory=list, description="Предупреждения запуска")

    def write(self, output: Path) -> Path:
        path = output.with_name(output.name + ".manifest.json")
        path.write_text(self.model_dump_json(indent=2), encoding="utf-8")
        logger.info(f"Манифест записан в {path}")
        return path


def _output(args: argparse.Namespace, default_name: str) -> Path:
    if args.out:
        return Path(args.out)
    Config.create_directories()
    return Config.OUTPUT_DIR / default_name


def cmd_gain_table(args: argparse.Namespace, scenario: ScenarioConfig) -> Outcome:
    """Таблица Ψ(τ, ε) для ε из сценария (в долях F)."""
    if not scenario.eps:
        raise UsageError("Список ε пуст: задайте eps в сценарии")
    g = scenario.filter_spec().build()
    table = gain_table(g, g, scenario.lattice(), scenario.eps_values(), scenario.n_tau, scenario.n_sum)
    path = table.to_csv(_output(args, "gain_table.csv"))
    return path, [], True


def cmd_tradeoff(args: argparse.Namespace, scenario: ScenarioConfig) -> Outcome:
    """Развёртка компромисса по оси F (RRC) или ρ (гауссов импульс)."""
    axis = args.axis or scenario.axis
    if axis not in DEFAULT_AXIS_VALUES:
        raise UsageError(f"Неизвестная ось '{axis}', допустимы: {', '.join(DEFAULT_AXIS_VALUES)}")
    curve = tradeoff_sweep(scenario.tradeoff_config(axis))
    path = curve.to_csv(_output(args, f"tradeoff_{axis}.csv"))
    return path, [], True


def _bits_warning(bits_target: int, reference_ber: np.ndarray) -> List[str]:
    positive = reference_ber[reference_ber > 0]
    if positive.size == 0:
        return []
    needed = 10 / float(positive.min())
    if bits_target < needed:
        message = f"bits_target={bits_target} меньше 10/min(BER) = {needed:.3g}: точность в хвосте кривой низкая"
        logger.warning(message)
        return [message]
    return []


def cmd_ber(args: argparse.Namespace, scenario: ScenarioConfig) -> Outcome:
    """
    Кривая BER: аналитика (analytic), Монте-Карло (mc) или обе со столбцом согласия (both).
    """
    grid = list(scenario.ebn0_db)
    if not grid:
        raise UsageError("Сетка Eb/N0 пуста: задайте ebn0_db в сценарии")
    output = _output(args, f"ber_{args.mode}.csv")
    meta = {"mode": args.mode, "scenario": scenario.scenario, "scheme": scenario.scheme.value,
            "M": scenario.M, "seed": scenario.seed}
    warnings: List[str] = []

    analytic = None
    if args.mode in ("analytic", "both"):
        analytic = ber_curve(grid, ModQam.from_order(scenario.M), scenario.laplace(), n_jobs=Config.SIM_THREADS)
        if args.mode == "analytic":
            return analytic.to_csv(output, meta), warnings, True

    measured = ber_sweep(scenario.trial_config(), grid)
    if np.any(measured.errors == 0):
        warnings.append("В некоторых точках нет ни одной ошибки: доверительный интервал вырожден")
    if analytic is None:
        warnings += _bits_warning(scenario.bits_target, measured.ber)
        return measured.to_csv(output, meta), warnings, True

    warnings += _bits_warning(scenario.bits_target, analytic.ber)
    frame = pd.DataFrame({
        "ebn0_db": analytic.ebn0_db,
        "ber_analytic": analytic.ber,
        "ber_mc": measured.ber,
        "ci": measured.ci_halfwidth,
        "sigma": measured.sigma,
        "bits": measured.bits,
        "errors": measured.errors,
        "agreement": agreement(analytic.ber, measured.ber, measured.bits),
    })
    worst = float(frame["agreement"].max())
    logger.info(f"Наибольшее расхождение аналитики и Монте-Карло: {worst:.2f}σ")
    return write_csv(frame, output, "ber_curve", meta), warnings, True


def cmd_validate(args: argparse.Namespace, scenario: ScenarioConfig) -> Outcome:
    """Критерии приёмки; код возврата 0 только если пройдены все."""
    results = run_validation(quick=args.quick, gain_table_path=args.gain_table)
    print(report_frame(results).to_string(index=False))
    path = write_report(results, Path(args.out)) if args.out else None
    warnings = [f"{r.name}: {r.detail}" for r in results if not r.passed]
    return path, warnings, all(r.passed for r in results)


COMMANDS = {
    "gain-table": cmd_gain_table,
    "tradeoff": cmd_tradeoff,
    "ber": cmd_ber,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="Файл сценария key = value")
    common.add_argument("--out", help="Выходной CSV")
    common.add_argument("--seed", type=int, help="Зерно генератора (переопределяет сценарий)")
    common.add_argument("--log-level", default=None, help="Уровень логирования (по умолчанию POT_LOG_LEVEL)")

    parser = argparse.ArgumentParser(
        prog="python -m src.cli",
        description="Частично перекрывающиеся поднесущие: коэффициенты помех, BER, проверка",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("gain-table", parents=[common], help="Таблица Ψ(τ, ε)")

    tradeoff = sub.add_parser("tradeoff", parents=[common], help="Кривая компромисса Ψ_self / Ψ_other")
    tradeoff.add_argument("--axis", choices=sorted(DEFAULT_AXIS_VALUES), help="Ось развёртки")

    ber = sub.add_parser("ber", parents=[common], help="Кривая BER")
    ber.add_argument("--mode", choices=["analytic", "mc", "both"], default="analytic")

    validate = sub.add_parser("validate", parents=[common], help="Критерии приёмки")
    validate.add_argument("--quick", action="store_true", help="Только быстрые критерии")
    validate.add_argument("--gain-table", help="Проверить внешнюю таблицу Ψ(τ, ε)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK

    setup_logger("src", level=args.log_level)
    start = time.perf_counter()
    try:
        scenario = load_scenario(args.config)
        if args.seed is not None:
            scenario = ScenarioConfig(**{**scenario.model_dump(by_alias=True), "seed": args.seed})
        path, warnings, passed = COMMANDS[args.command](args, scenario)
    except UsageError as e:
        logger.error(f"Ошибка использования: {e}")
        return EXIT_USAGE
    except ValidationError as e:
        logger.error(f"Некорректные параметры:\n{e}")
        return EXIT_FAILURE
    except PotError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_FAILURE

    if path is not None:
        RunManifest(
            command=args.command,
            config_path=args.config,
            output_path=str(path),
            seed=scenario.seed,
            duration_s=time.perf_counter() - start,
            parameters=scenario.model_dump(mode="json", by_alias=True),
            warnings=warnings,
        ).write(path)
    return EXIT_OK if passed else EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
