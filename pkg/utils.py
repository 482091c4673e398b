#!/usr/bin/env python3
"""
通用工具函数模块

提供Asymptotica项目中常用的工具函数，包括报告文件写出、平面配置文件读取、日志配置等
"""

import json
import logging
import math
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from dotenv import dotenv_values

from errors import ConfigurationError

logger = logging.getLogger(__name__)


def to_jsonable(value: Any) -> Any:
    """把 numpy 标量/数组、Fraction、非有限浮点数转换为 JSON 可表示的值"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in sorted(value.items(), key=lambda item: str(item[0]))}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        return to_jsonable(value.item())
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, complex):
        return {"real": to_jsonable(value.real), "imag": to_jsonable(value.imag)}
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    return value


class FileUtils:
    """文件操作工具类"""

    @staticmethod
    def ensure_report_dir(directory: Union[str, Path]) -> Path:
        """
        创建报告输出目录 (含父目录) 并返回其路径

        Raises:
            ConfigurationError: 路径已被普通文件占用或无法创建
        """
        path = Path(directory)
        if path.exists() and not path.is_dir():
            raise ConfigurationError(f"Report directory {path} exists and is not a directory")
        try:
            path.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ConfigurationError(f"Cannot create report directory {path}: {e}") from e
        return path

    @staticmethod
    def write_json(file_path: str, data: Dict[str, Any]) -> str:
        """写出 JSON，键排序以保证可复现"""
        FileUtils.ensure_report_dir(Path(file_path).parent)
        with open(file_path, 'w', encoding='utf-8') as f:
            json.dump(to_jsonable(data), f, ensure_ascii=False, indent=2, sort_keys=True)
        logger.debug(f"Wrote report {file_path}")
        return file_path

    @staticmethod
    def read_json(file_path: str) -> Dict[str, Any]:
        with open(file_path, 'r', encoding='utf-8') as f:
            return json.load(f)

    @staticmethod
    def write_csv(file_path: str, rows: Sequence[Dict[str, Any]], columns: Optional[List[str]] = None) -> str:
        """用 pandas 写出 CSV"""
        FileUtils.ensure_report_dir(Path(file_path).parent)
        frame = pd.DataFrame(list(rows), columns=columns)
        frame.to_csv(file_path, index=False, float_format="%.17g")
        logger.debug(f"Wrote {len(frame)} rows to {file_path}")
        return file_path


class ConfigUtils:
    """配置工具类"""

    @staticmethod
    def load_flat_config(file_path: str) -> Dict[str, str]:
        """
        加载 `key = value` 形式的平面配置文件

        Raises:
            ConfigurationError: 文件不存在
        """
        if not Path(file_path).exists():
            raise ConfigurationError(f"Config file not found: {file_path}")
        values = dotenv_values(file_path)
        return {key.strip().lower(): value for key, value in values.items() if value is not None}

    @staticmethod
    def parse_overrides(pairs: Sequence[str]) -> Dict[str, str]:
        """解析命令行 `key=value` 覆盖项"""
        overrides = {}
        for pair in pairs or ():
            if "=" not in pair:
                raise ConfigurationError(f"Expected key=value, got {pair!r}")
            key, value = pair.split("=", 1)
            overrides[key.strip().lower()] = value.strip()
        return overrides


# 日志配置
LOG_FORMAT = "%(asctime)s %(levelname)-7s [%(name)s] %(message)s"
LOG_DATE_FORMAT = "%H:%M:%S"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def configure_logging(level: str = "INFO", log_file: Optional[str] = None) -> logging.Logger:
    """
    命令行运行的日志配置

    控制台按 level 输出到 stderr；给出 log_file 时文件另外记录 DEBUG 级别的完整实验轨迹
    (网格与拟合样本)，不受 level 限制。

    Raises:
        ConfigurationError: 未知的日志级别，或日志目录无法创建
    """
    name = level.upper()
    if name not in LOG_LEVELS:
        raise ConfigurationError(f"Unknown log level {level!r}; expected one of {', '.join(LOG_LEVELS)}")
    console_level = getattr(logging, name)

    console = logging.StreamHandler(sys.stderr)
    console.setLevel(console_level)
    handlers: List[logging.Handler] = [console]
    if log_file:
        FileUtils.ensure_report_dir(Path(log_file).parent)
        trace = logging.FileHandler(log_file, encoding="utf-8")
        trace.setLevel(logging.DEBUG)
        handlers.append(trace)

    logging.basicConfig(
        level=logging.DEBUG if log_file else console_level,
        format=LOG_FORMAT,
        datefmt=LOG_DATE_FORMAT,
        handlers=handlers,
        force=True
    )
    return logging.getLogger("asymptotica")
