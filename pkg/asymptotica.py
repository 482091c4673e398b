#!/usr/bin/env python3
"""
Asymptotica command line

    asymptotica <experiment> [--config PATH] [--out DIR] [--seed N] [--coeff exact|float] [--truncation K]
                             [--param key=value ...] [--log-level LEVEL] [--log-file PATH]
    asymptotica list
    asymptotica repl [--coeff exact|float] [--truncation K]

退出码：0 全部判定通过，1 判定失败，2 配置错误，3 数值错误。
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional, TextIO

from errors import AsymptoticaError, ConfigurationError
from experiment_runner import EXPERIMENT_NAMES, ExperimentRunner
from field_expression import evaluate_text
from laurent_field import COEFFICIENT_DOMAINS, field_settings, get_field_settings
from utils import LOG_LEVELS, ConfigUtils, configure_logging

logger = logging.getLogger(__name__)

PROMPT = "asymptotica> "


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asymptotica",
        description="Non-Archimedean numerics workbench: Laurent field, mollifiers, distributions, Hopf waves.",
    )
    parser.add_argument("command", choices=list(EXPERIMENT_NAMES) + ["list", "repl"],
                        help="experiment to run, 'list' to show experiments, 'repl' for the field calculator")
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--out", help="output directory for reports")
    parser.add_argument("--seed", type=int, help="seed for randomized inputs")
    parser.add_argument("--coeff", choices=COEFFICIENT_DOMAINS, help="coefficient domain of the Laurent field")
    parser.add_argument("--truncation", type=int, help="truncation order K")
    parser.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                        help="override any experiment parameter (repeatable)")
    parser.add_argument("--log-level", default="INFO", type=str.upper, choices=LOG_LEVELS,
                        help="console log level")
    parser.add_argument("--log-file", help="also write a DEBUG-level trace of the run to this file")
    return parser


def collect_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """--param 覆盖项，再叠加显式命令行选项"""
    overrides: Dict[str, Any] = ConfigUtils.parse_overrides(args.param)
    for key in ("out", "seed", "coeff", "truncation"):
        value = getattr(args, key)
        if value is not None:
            overrides[key] = value
    return overrides


def run_repl(stdin: TextIO = sys.stdin, stdout: TextIO = sys.stdout) -> int:
    """逐行读取表达式，打印规范文本、尺度类与标准部"""
    settings = get_field_settings()
    print(f"Laurent field calculator (K={settings.truncation_order}, {settings.coefficient_domain}); "
          f"symbol r is the infinitesimal, functions sqrt st inv. Ctrl-D to quit.", file=stdout)
    while True:
        stdout.write(PROMPT)
        stdout.flush()
        line = stdin.readline()
        if not line:
            print(file=stdout)
            return 0
        line = line.strip()
        if not line:
            continue
        if line in ("quit", "exit"):
            return 0
        try:
            result = evaluate_text(line)
        except AsymptoticaError as e:
            print(f"error: {e}", file=stdout)
            continue
        print(result["value"], file=stdout)
        print(f"  class: {result['class']}", file=stdout)
        print(f"  st:    {result['standard_part']}", file=stdout)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        configure_logging(args.log_level, args.log_file)
    except ConfigurationError as e:
        print(f"[error] {e}", file=sys.stderr)
        return e.exit_code
    runner = ExperimentRunner()

    if args.command == "list":
        for item in runner.get_experiments():
            print(f"{item['name']:<12} {item['description']}")
            print(f"{'':<12} parameters: {', '.join(item['parameters'])}")
        return 0

    if args.command == "repl":
        try:
            with field_settings(args.coeff, args.truncation):
                return run_repl()
        except ConfigurationError as e:
            print(f"[error] {e}", file=sys.stderr)
            return e.exit_code

    try:
        overrides = collect_overrides(args)
    except ConfigurationError as e:
        print(f"[error] {e}", file=sys.stderr)
        return e.exit_code

    result = runner.call_experiment(args.command, args.config, overrides)
    if not result["success"]:
        print(f"[{args.command}] ERROR ({result['error_type']}): {result['error']}", file=sys.stderr)
        return result["exit_code"]

    print(json.dumps(result["files"], ensure_ascii=False, sort_keys=True))
    print(f"[{args.command}] {'PASS' if result['passed'] else 'FAIL'}")
    return 0 if result["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
