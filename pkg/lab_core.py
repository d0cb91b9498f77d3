#!/usr/bin/env python3
"""
实验室主控 - 命令行入口
子命令：table / rates / simulate / probe-design / estimate-demo / threshold / serve
日志写 stderr，结果（CSV / JSON）写 stdout
"""

import argparse
import asyncio
import json
import logging
import signal
import sys
import os
import traceback
from typing import List, Optional

# 设置路径
BASE_DIR = os.path.dirname(os.path.abspath(__file__))
if BASE_DIR not in sys.path:
    sys.path.insert(0, BASE_DIR)

import numpy as np

from core_math.conventions import DomainError
from css_codes.matrices import CodeError
from key_rates.published import TABLE_CONVENTION, TABLE_DECODE, TABLE_LABELING
from key_rates import (
    MODULATION_CONVENTIONS,
    DEFAULT_LOSSES,
    EP_SOURCES,
    TableError,
    ThresholdError,
    ERROR_MODELS,
    build_table_rows,
    write_table_csv,
    rate_formula_audit,
    best_decode_configuration,
    format_discrepancy_table,
    solve_threshold,
    provenance,
)
from phase_estimator.probes import DEFAULT_EPS_MAX, DEFAULT_COND_MAX, ProbeDesignError, design_probes
from phase_estimator.estimator import SingularGammaError
from phase_estimator.demo import run_estimator_demo
from qkd_session.config import ConfigError, load_session_config
from qkd_session.records import EXIT_KEY, EXIT_ERROR
from qkd_session.session import run_session
from qkd_session.settings import LabSettings
from qkd_session.transcript import Transcript, to_jsonable

logger = logging.getLogger(__name__)

# 命令行可转换为退出码 1 的领域错误
HANDLED_ERRORS = (
    ConfigError,
    TableError,
    ThresholdError,
    ProbeDesignError,
    SingularGammaError,
    DomainError,
    CodeError,
)


def _print_json(data) -> None:
    print(json.dumps(to_jsonable(data), indent=2, ensure_ascii=False))


def _parse_losses(raw: Optional[str]) -> List[float]:
    if raw is None:
        return list(DEFAULT_LOSSES)
    try:
        return [float(v) for v in raw.split(",") if v.strip()]
    except ValueError as e:
        raise TableError(f"无法解析损耗列表 {raw!r}: {e}") from e


class LabCore:
    """serve 子命令：HTTP 服务 + 主循环 + 信号处理"""

    def __init__(self, host: Optional[str] = None, port: Optional[int] = None):
        self.host = host
        self.port = port
        self.http_server = None
        self.running = False

        # 信号处理
        signal.signal(signal.SIGINT, self.handle_signal)
        signal.signal(signal.SIGTERM, self.handle_signal)

    async def initialize(self) -> bool:
        logger.info("=" * 60)
        logger.info("实验室服务启动中...")
        logger.info("=" * 60)

        try:
            for problem in LabSettings.validate_config():
                logger.warning(f"配置检查: {problem}")

            from http_server.server import LabHTTPServer
            logger.info("【1️⃣】创建HTTP服务器...")
            self.http_server = LabHTTPServer(host=self.host, port=self.port)

            logger.info("【2️⃣】启动HTTP服务器...")
            await self.http_server.start()

            self.running = True
            logger.info("=" * 60)
            logger.info("🚀 实验室服务启动完成！")
            logger.info("=" * 60)
            return True

        except Exception as e:
            logger.error(f"🚨 初始化失败: {e}")
            logger.error(traceback.format_exc())
            return False

    async def run(self) -> int:
        try:
            success = await self.initialize()
            if not success:
                logger.error("初始化失败，程序退出")
                return EXIT_ERROR

            logger.info("🛑 按 Ctrl+C 停止")
            while self.running:
                await asyncio.sleep(1)
            return EXIT_KEY

        except Exception as e:
            logger.error(f"运行错误: {e}")
            logger.error(traceback.format_exc())
            return EXIT_ERROR
        finally:
            await self.shutdown()

    def handle_signal(self, signum, frame):
        logger.info(f"收到信号 {signum}，开始关闭...")
        self.running = False

    async def shutdown(self):
        self.running = False
        logger.info("正在关闭实验室服务...")
        try:
            if self.http_server:
                await self.http_server.shutdown()
            logger.info("✅ 实验室服务已关闭")
        except Exception as e:
            logger.error(f"关闭出错: {e}")


# ---------------------------------------------------------------- 子命令

def cmd_table(args) -> int:
    losses = _parse_losses(args.loss_db)
    v_mod = MODULATION_CONVENTIONS[args.convention]
    rows = build_table_rows(losses, args.ep_source, args.decode, args.labeling, v_mod)
    write_table_csv(rows, sys.stdout)
    return EXIT_KEY


def cmd_rates(args) -> int:
    result = {"rate_audit": rate_formula_audit()}
    if not args.no_score:
        scoring = best_decode_configuration()
        if not scoring["strict_tier_met"]:
            print(format_discrepancy_table(scoring), file=sys.stderr)
        result["decode_scoring"] = scoring
    _print_json(result)
    return EXIT_KEY


def cmd_simulate(args) -> int:
    cfg = load_session_config(args.config).with_seed(args.seed)
    transcript = Transcript()
    report = run_session(cfg, transcript)

    if args.transcript:
        with open(args.transcript, "w", encoding="utf-8") as f:
            transcript.dump_ndjson(f)
        logger.info(f"📝 公开记录已写入 {args.transcript} ({len(transcript.messages)} 条)")

    _print_json(report.to_dict(volatile=False))
    return report.exit_code


def cmd_probe_design(args) -> int:
    rng = np.random.default_rng(args.seed)
    probes = design_probes(args.cutoff, eps_max=args.eps, cond_max=args.cond_max, rng=rng)
    _print_json(probes.to_dict())
    return EXIT_KEY


def cmd_estimate_demo(args) -> int:
    result = run_estimator_demo(
        loss_db=args.loss_db,
        samples=args.samples,
        cutoff=args.cutoff,
        seed=args.seed,
    )
    _print_json(result)
    return EXIT_KEY


def cmd_threshold(args) -> int:
    _print_json(solve_threshold(args.model).to_dict())
    return EXIT_KEY


def cmd_serve(args) -> int:
    core = LabCore(host=args.host, port=args.port)
    return asyncio.run(core.run())


class LabArgumentParser(argparse.ArgumentParser):
    """用法错误按输入非法处理，退出码 1"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = LabArgumentParser(prog="cvqkd-lab", description="连续变量 QKD 模拟实验室")
    parser.add_argument("--version", action="version", version=provenance())
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="两切片净密钥率表（CSV）")
    p.add_argument("--loss-db", default=None, help="逗号分隔的损耗列表（dB）")
    p.add_argument("--ep-source", choices=EP_SOURCES, default="paper")
    p.add_argument("--decode", default=TABLE_DECODE)
    p.add_argument("--labeling", default=TABLE_LABELING)
    p.add_argument("--convention", choices=sorted(MODULATION_CONVENTIONS), default=TABLE_CONVENTION,
                   help="31 倍真空噪声按信号方差（signal）还是总方差（total）理解")
    p.set_defaults(handler=cmd_table)

    p = sub.add_parser("rates", help="速率公式核对与解码配置评分（JSON）")
    p.add_argument("--no-score", action="store_true", help="跳过解码配置评分")
    p.set_defaults(handler=cmd_rates)

    p = sub.add_parser("simulate", help="运行一次会话（JSON 报告）")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--transcript", default=None, help="NDJSON 公开记录输出路径")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("probe-design", help="设计相干探针（JSON）")
    p.add_argument("--cutoff", type=int, default=1)
    p.add_argument("--eps", type=float, default=DEFAULT_EPS_MAX)
    p.add_argument("--cond-max", type=float, default=DEFAULT_COND_MAX)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(handler=cmd_probe_design)

    p = sub.add_parser("estimate-demo", help="估计器对照高斯真值（JSON）")
    p.add_argument("--loss-db", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--cutoff", type=int, default=2)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(handler=cmd_estimate_demo)

    p = sub.add_parser("threshold", help="压缩阈值（JSON）")
    p.add_argument("--model", choices=sorted(ERROR_MODELS), default="symmetric-erfc")
    p.set_defaults(handler=cmd_threshold)

    p = sub.add_parser("serve", help="启动实验室 HTTP 服务")
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    p.set_defaults(handler=cmd_serve)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """主函数，返回退出码"""
    logging.basicConfig(
        level=getattr(logging, LabSettings.LOG_LEVEL, logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except HANDLED_ERRORS as e:
        logger.error(f"❌ {args.command} 失败: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except KeyboardInterrupt:
        logger.info("程序已停止")
        return EXIT_KEY
    except Exception as e:
        logger.error(f"程序错误: {e}")
        logger.error(traceback.format_exc())
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
