"""
命令行入口

子命令：
    solve         求经典值或量子值
    dual          对偶游戏对的比较
    activation    重置门对量子优势的激活
    catalog       列出内置游戏
    map-strategy  在 XOR 与 XOR* 策略之间映射

标准输出只写结果（JSON 信封或表格），日志写到标准错误。
"""

import argparse
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import structlog
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from xorduel import __version__
from xorduel.core.config import Settings, get_settings
from xorduel.core.errors import (
    EXIT_DUAL_FAIL,
    EXIT_OK,
    IncompatibleModeError,
    InvalidOptionError,
    SpecMismatchError,
    UnknownCatalogKeyError,
    render_cli_error,
)
from xorduel.core.logging import get_logger, setup_logging
from xorduel.schemas.game_schemas import GameKind, GameSpec
from xorduel.schemas.result_schemas import (
    CatalogListing,
    ClassicalMode,
    DualPairReport,
    ExpectedValue,
    OptimizerConfig,
    QuantumMode,
    ResetActivationReport,
    ResultEnvelope,
    SolveResult,
)
from xorduel.schemas.strategy_schemas import QuantumXorStarStrategy, QuantumXorStrategy
from xorduel.services import catalog_service
from xorduel.services.classical_solver_service import ClassicalSolverService
from xorduel.services.duality_service import (
    DualityService,
    map_xor_to_xorstar,
    map_xorstar_to_xor,
)
from xorduel.services.quantum_solver_service import (
    QuantumSolverService,
    eval_quantum_xor,
    eval_quantum_xorstar,
)
from xorduel.utils.serialization import (
    dumps,
    envelope_to_dict,
    load_game,
    load_strategy,
    save_result,
    save_strategy,
    strategy_to_dict,
)

logger = get_logger(__name__)


# ---------------------------------------------------------------------------
# 参数解析
# ---------------------------------------------------------------------------


def _add_game_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--kind", choices=[k.value for k in GameKind], help="取对偶游戏对中的哪一侧")
    parser.add_argument("--n", type=int, default=None, help="奇数环游戏的规模（奇数，≥3）")


def _add_optimizer_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--restarts", type=int, default=None, help="随机重启次数（默认 64）")
    parser.add_argument("--seed", type=int, default=None, help="随机种子（默认 0）")
    parser.add_argument("--workers", type=int, default=None, help="工作进程数（默认读取 XORDUEL_THREADS）")


def _add_output_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol", type=float, default=None, help="与参考值比较的报告容差（默认 1e-4）")
    parser.add_argument("--out", type=Path, default=None, help="结果写入的文件")
    parser.add_argument("--format", choices=["json", "table"], default="json", help="输出格式")
    parser.add_argument(
        "--wall-clock",
        action="store_true",
        help="写入真实时间戳与耗时（关闭可复现输出）",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xorduel",
        description="XOR 非局域游戏与 XOR* 顺序游戏的经典值、量子值求解器",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="日志级别（默认读取 XORDUEL_LOG_LEVEL）")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="求经典值或量子值")
    solve.add_argument("game", help="目录键或游戏文件（JSON/YAML）")
    solve.add_argument("--model", choices=["classical", "quantum"], default="quantum")
    solve.add_argument("--allow-reset", action="store_true", help="允许 Bob 使用重置门（仅 XOR*）")
    solve.add_argument("--method", choices=["simplex", "seesaw"], default="simplex", help="XOR 量子值的求解方法")
    solve.add_argument("--dim", type=int, default=None, help="see-saw 向量维度")
    _add_game_options(solve)
    _add_optimizer_options(solve)
    _add_output_options(solve)
    solve.set_defaults(handler=cmd_solve)

    dual = sub.add_parser("dual", help="比较对偶游戏对")
    dual.add_argument("games", nargs="+", help="目录键，或一至两个游戏文件")
    dual.add_argument("--n", type=int, default=None, help="奇数环游戏的规模（奇数，≥3）")
    _add_optimizer_options(dual)
    _add_output_options(dual)
    dual.set_defaults(handler=cmd_dual)

    activation = sub.add_parser("activation", help="重置门对量子优势的激活")
    activation.add_argument("game", help="目录键或 XOR* 游戏文件")
    activation.add_argument("--n", type=int, default=None, help="奇数环游戏的规模（奇数，≥3）")
    _add_optimizer_options(activation)
    _add_output_options(activation)
    activation.set_defaults(handler=cmd_activation)

    catalog = sub.add_parser("catalog", help="列出内置游戏")
    catalog.add_argument("--format", choices=["json", "table"], default="json")
    catalog.set_defaults(handler=cmd_catalog)

    mapper = sub.add_parser("map-strategy", help="在 XOR 与 XOR* 量子策略之间映射")
    mapper.add_argument("strategy", type=Path, help="量子策略文件")
    mapper.add_argument("--to", choices=["xor", "xorstar"], required=True, help="目标一侧")
    mapper.add_argument("--game", required=True, help="用于计算胜率的目录键或游戏文件")
    mapper.add_argument("--n", type=int, default=None)
    mapper.add_argument("--out", type=Path, default=None, help="映射后策略的输出文件")
    mapper.set_defaults(handler=cmd_map_strategy)

    return parser


# ---------------------------------------------------------------------------
# 公共工具
# ---------------------------------------------------------------------------


def _resolve_game(source: str, n: Optional[int], kind: Optional[str]) -> GameSpec:
    """目录键优先，其次按文件读取"""
    side = GameKind(kind) if kind else None
    if catalog_service.is_catalog_key(source):
        return catalog_service.resolve(source, n=n, kind=side)

    path = Path(source)
    if not path.suffix and not path.exists():
        raise UnknownCatalogKeyError(
            f"未知的目录键: {source}",
            details={"key": source, "known": sorted(catalog_service.CATALOG)},
        )
    spec = load_game(path)
    if side is not None and side is not spec.kind:
        spec = spec.with_kind(side)
    return spec


def _optimizer_config(args: argparse.Namespace, settings: Settings) -> OptimizerConfig:
    try:
        return OptimizerConfig.from_settings(
            settings,
            restarts=args.restarts,
            seed=args.seed,
            workers=args.workers,
            seesaw_dim=getattr(args, "dim", None),
        )
    except ValidationError as exc:
        fields = sorted({str(err["loc"][0]) for err in exc.errors() if err["loc"]})
        raise InvalidOptionError(
            f"优化器选项取值非法: {', '.join(fields)}",
            details={"options": fields},
        ) from exc


def _reproducible(args: argparse.Namespace, settings: Settings) -> bool:
    return settings.REPRODUCIBLE_OUTPUT and not args.wall_clock


def _timestamp(reproducible: bool, settings: Settings) -> str:
    if reproducible:
        moment = datetime.fromtimestamp(settings.SOURCE_DATE_EPOCH, tz=timezone.utc)
    else:
        moment = datetime.now(timezone.utc)
    return moment.isoformat()


def _within(
    values: Dict[str, float],
    expected: Optional[Dict[str, ExpectedValue]],
    tol: float,
) -> Optional[bool]:
    if not expected:
        return None
    return all(
        abs(values[name] - ref.value) <= max(tol, ref.tol)
        for name, ref in expected.items()
        if name in values
    )


def _emit(
    envelope: ResultEnvelope,
    args: argparse.Namespace,
    table: Optional[Table] = None,
) -> None:
    if args.out is not None:
        save_result(envelope, args.out)
    if args.format == "table" and table is not None:
        Console(file=sys.stdout, soft_wrap=True).print(table)
    else:
        sys.stdout.write(dumps(envelope_to_dict(envelope)) + "\n")


def _fmt(value: Optional[float]) -> str:
    return "-" if value is None else repr(value)


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def _bound_key(model: str, spec: GameSpec, allow_reset: bool) -> str:
    if spec.kind is GameKind.XOR:
        return f"{model}_xor"
    return f"{model}_xorstar_{'irr' if allow_reset else 'rev'}"


def cmd_solve(args: argparse.Namespace) -> int:
    settings = get_settings()
    spec = _resolve_game(args.game, args.n, args.kind)
    structlog.contextvars.bind_contextvars(command="solve", game=spec.name)

    if args.allow_reset and spec.kind is GameKind.XOR:
        raise IncompatibleModeError(
            "--allow-reset 仅适用于 XOR* 游戏", details={"game": spec.name}
        )
    if args.method == "seesaw" and (spec.kind is not GameKind.XOR or args.model != "quantum"):
        raise IncompatibleModeError(
            "--method seesaw 仅适用于 XOR 游戏的量子值", details={"game": spec.name}
        )

    cfg = _optimizer_config(args, settings)
    result, mode_label = _run_solve(spec, args, cfg, settings)

    reproducible = _reproducible(args, settings)
    if reproducible:
        logger.info("求解耗时", elapsed_ms=result.elapsed_ms)
        result = result.model_copy(update={"elapsed_ms": 0})

    expected = None
    if catalog_service.is_catalog_key(args.game):
        bound_key = _bound_key(args.model, spec, args.allow_reset)
        bounds = catalog_service.expected_bounds(args.game, args.n)
        if bound_key in bounds:
            expected = {bound_key: bounds[bound_key]}
    tol = settings.REPORT_TOL if args.tol is None else args.tol
    within = _within({k: result.value for k in (expected or {})}, expected, tol)

    envelope = ResultEnvelope(
        tool_version=__version__,
        game=spec,
        mode=mode_label,
        config=cfg,
        result=result,
        timestamp=_timestamp(reproducible, settings),
        expected=expected,
        within_tolerance=within,
    )
    _emit(envelope, args, _solve_table(envelope))
    return EXIT_OK


def _run_solve(
    spec: GameSpec,
    args: argparse.Namespace,
    cfg: OptimizerConfig,
    settings: Settings,
) -> Tuple[SolveResult, str]:
    if args.model == "classical":
        if spec.kind is GameKind.XOR:
            mode = ClassicalMode.XOR
        elif args.allow_reset:
            mode = ClassicalMode.XORSTAR_IRREVERSIBLE
        else:
            mode = ClassicalMode.XORSTAR_REVERSIBLE
        return ClassicalSolverService(settings).classical_value(spec, mode), f"classical:{mode.value}"

    solver = QuantumSolverService(settings)
    if args.method == "seesaw":
        return solver.seesaw_xor_value(spec, cfg), "quantum:seesaw"
    if spec.kind is GameKind.XOR:
        qmode = QuantumMode.XOR_QUBIT
    elif args.allow_reset:
        qmode = QuantumMode.XORSTAR_IRREVERSIBLE
    else:
        qmode = QuantumMode.XORSTAR_REVERSIBLE
    return solver.quantum_value(spec, qmode, cfg), f"quantum:{qmode.value}"


def _solve_table(envelope: ResultEnvelope) -> Table:
    result = envelope.result
    assert isinstance(result, SolveResult)
    table = Table(title=f"🎯 {envelope.game.name}  ({envelope.mode})")
    table.add_column("项目", style="cyan")
    table.add_column("值", style="green")
    table.add_row("value", _fmt(result.value))
    for name, ref in (envelope.expected or {}).items():
        table.add_row(f"expected ({name})", f"{ref.value!r} ± {ref.tol:g}")
    if envelope.within_tolerance is not None:
        table.add_row("within tolerance", "✅" if envelope.within_tolerance else "❌")
    table.add_row("converged", str(result.converged))
    table.add_row("restarts", str(result.restarts_used))
    table.add_row("seed", str(envelope.config.seed))
    return table


# ---------------------------------------------------------------------------
# dual / activation
# ---------------------------------------------------------------------------


def _dual_specs(sources: Sequence[str], n: Optional[int]) -> Tuple[GameSpec, GameSpec]:
    if len(sources) > 2:
        raise SpecMismatchError("dual 最多接受两个游戏文件")
    if len(sources) == 1:
        if catalog_service.is_catalog_key(sources[0]):
            return catalog_service.build(sources[0], n)
        spec = _resolve_game(sources[0], n, None)
        pair = (spec, spec.with_kind(spec.kind.dual))
    else:
        pair = (_resolve_game(sources[0], n, None), _resolve_game(sources[1], n, None))
    xor_first = sorted(pair, key=lambda s: s.kind is not GameKind.XOR)
    return xor_first[0], xor_first[1]


def cmd_dual(args: argparse.Namespace) -> int:
    settings = get_settings()
    xor_spec, star_spec = _dual_specs(args.games, args.n)
    structlog.contextvars.bind_contextvars(command="dual", game=xor_spec.name)

    cfg = _optimizer_config(args, settings)
    report = DualityService(settings).compare_dual_pair((xor_spec, star_spec), cfg)

    expected = None
    within = None
    if len(args.games) == 1 and catalog_service.is_catalog_key(args.games[0]):
        bounds = catalog_service.expected_bounds(args.games[0], args.n)
        expected = {
            k: bounds[k]
            for k in (
                catalog_service.CLASSICAL_XOR,
                catalog_service.QUANTUM_XOR,
                catalog_service.CLASSICAL_XORSTAR_REV,
                catalog_service.QUANTUM_XORSTAR_REV,
            )
        }
        tol = settings.REPORT_TOL if args.tol is None else args.tol
        within = _within(
            {
                catalog_service.CLASSICAL_XOR: report.omega_c_xor,
                catalog_service.QUANTUM_XOR: report.omega_q_xor,
                catalog_service.CLASSICAL_XORSTAR_REV: report.omega_c_xorstar_rev,
                catalog_service.QUANTUM_XORSTAR_REV: report.omega_q_xorstar_rev,
            },
            expected,
            tol,
        )

    reproducible = _reproducible(args, settings)
    envelope = ResultEnvelope(
        tool_version=__version__,
        game=xor_spec,
        mode="dual",
        config=cfg,
        result=report,
        timestamp=_timestamp(reproducible, settings),
        expected=expected,
        within_tolerance=within,
    )
    _emit(envelope, args, _dual_table(report))
    return EXIT_OK if report.passed else EXIT_DUAL_FAIL


def _dual_table(report: DualPairReport) -> Table:
    verdict = "✅ PASS" if report.passed else "❌ FAIL"
    table = Table(title=f"🔁 {report.game_name}  {verdict}")
    table.add_column("", style="cyan")
    table.add_column("XOR", style="green")
    table.add_column("XOR* (reversible)", style="green")
    table.add_row("ω_c", _fmt(report.omega_c_xor), _fmt(report.omega_c_xorstar_rev))
    table.add_row("ω_q", _fmt(report.omega_q_xor), _fmt(report.omega_q_xorstar_rev))
    table.add_row("Ω", _fmt(report.gap_xor), _fmt(report.gap_xorstar))
    table.add_row("max discrepancy", _fmt(report.max_abs_discrepancy), "")
    return table


def cmd_activation(args: argparse.Namespace) -> int:
    settings = get_settings()
    spec = _resolve_game(args.game, args.n, GameKind.XOR_STAR.value)
    structlog.contextvars.bind_contextvars(command="activation", game=spec.name)

    cfg = _optimizer_config(args, settings)
    report = DualityService(settings).compare_reset_activation(spec, cfg)

    expected = None
    within = None
    if catalog_service.is_catalog_key(args.game):
        bounds = catalog_service.expected_bounds(args.game, args.n)
        mapping = {
            catalog_service.CLASSICAL_XORSTAR_REV: report.omega_c_rev,
            catalog_service.QUANTUM_XORSTAR_REV: report.omega_q_rev,
            catalog_service.CLASSICAL_XORSTAR_IRR: report.omega_c_irr,
            catalog_service.QUANTUM_XORSTAR_IRR: report.omega_q_irr,
        }
        expected = {k: bounds[k] for k in mapping if k in bounds}
        tol = settings.REPORT_TOL if args.tol is None else args.tol
        within = _within(mapping, expected, tol)

    reproducible = _reproducible(args, settings)
    envelope = ResultEnvelope(
        tool_version=__version__,
        game=spec,
        mode="activation",
        config=cfg,
        result=report,
        timestamp=_timestamp(reproducible, settings),
        expected=expected,
        within_tolerance=within,
    )
    _emit(envelope, args, _activation_table(report))
    return EXIT_OK


def _activation_table(report: ResetActivationReport) -> Table:
    status = "⚡ activated" if report.activated else "💤 not activated"
    table = Table(title=f"🔓 {report.game_name}  {status}")
    table.add_column("", style="cyan")
    table.add_column("reversible", style="green")
    table.add_column("with reset", style="green")
    table.add_row("ω_c", _fmt(report.omega_c_rev), _fmt(report.omega_c_irr))
    table.add_row("ω_q", _fmt(report.omega_q_rev), _fmt(report.omega_q_irr))
    table.add_row("Ω", _fmt(report.gap_rev), _fmt(report.gap_irr))
    return table


# ---------------------------------------------------------------------------
# catalog / map-strategy
# ---------------------------------------------------------------------------


def cmd_catalog(args: argparse.Namespace) -> int:
    listing = CatalogListing(tool_version=__version__, entries=catalog_service.list_entries())
    if args.format == "json":
        sys.stdout.write(dumps(listing.model_dump(mode="json")) + "\n")
        return EXIT_OK

    table = Table(title="📚 xorduel catalog")
    for column in ("key", "side", "|S|×|T|", "ω_c", "ω_q"):
        table.add_column(column)
    for entry in listing.entries:
        classical = entry.expected[catalog_service.CLASSICAL_XOR]
        quantum = entry.expected[catalog_service.QUANTUM_XOR]
        label = entry.key + (f" (n={entry.params['n']})" if entry.params else "")
        table.add_row(
            label,
            entry.native_kind.value,
            f"{entry.s_card}×{entry.t_card}",
            f"{classical.value:.6f}",
            f"{quantum.value:.6f}",
        )
    Console(file=sys.stdout, soft_wrap=True).print(table)
    return EXIT_OK


def cmd_map_strategy(args: argparse.Namespace) -> int:
    strategy = load_strategy(args.strategy)
    game = _resolve_game(args.game, args.n, None)
    xor_spec = game if game.kind is GameKind.XOR else game.with_kind(GameKind.XOR)
    star_spec = game if game.kind is GameKind.XOR_STAR else game.with_kind(GameKind.XOR_STAR)
    structlog.contextvars.bind_contextvars(command="map-strategy", game=game.name)

    if args.to == "xor":
        if not isinstance(strategy, QuantumXorStarStrategy):
            raise IncompatibleModeError("--to xor 需要 q_xorstar 策略", details={"type": strategy.type})
        mapped = map_xorstar_to_xor(strategy)
        source_win = eval_quantum_xorstar(star_spec, strategy)
        mapped_win = eval_quantum_xor(xor_spec, mapped)
    else:
        if not isinstance(strategy, QuantumXorStrategy):
            raise IncompatibleModeError("--to xorstar 需要 q_xor 策略", details={"type": strategy.type})
        mapped = map_xor_to_xorstar(strategy)
        source_win = eval_quantum_xor(xor_spec, strategy)
        mapped_win = eval_quantum_xorstar(star_spec, mapped)

    if args.out is not None:
        save_strategy(mapped, args.out)
    summary = {
        "source_win": source_win,
        "mapped_win": mapped_win,
        "abs_difference": abs(source_win - mapped_win),
        "strategy": strategy_to_dict(mapped),
    }
    logger.info("策略映射完成", to=args.to, abs_difference=summary["abs_difference"])
    sys.stdout.write(dumps(summary) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# 入口
# ---------------------------------------------------------------------------


def main(argv: Optional[List[str]] = None) -> int:
    """命令行主函数，返回进程退出码"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    setup_logging(level=args.log_level)
    structlog.contextvars.clear_contextvars()
    try:
        return args.handler(args)
    except Exception as exc:  # noqa: BLE001
        return render_cli_error(exc)


if __name__ == "__main__":
    sys.exit(main())
