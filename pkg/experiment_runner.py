#!/usr/bin/env python3
"""
Asymptotica Experiment Runner

实验配置 (pydantic 校验)、实验注册表以及统一的调度入口。
调度层捕获库函数抛出的异常并转换为结果字典，由命令行映射为退出码。
"""

import logging
import math
import traceback
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator

from bump_functions import panel_by_name, spacetime_panel
from distribution_lab import (
    DiracDelta,
    Heaviside,
    PolynomialDistribution,
    polynomial_reproduction_check,
    regularization_report,
    regularized_product_experiment,
    shock_conservation_check,
    smooth_embedding_scan,
    weak_solution_identity,
)
from errors import AsymptoticaError, ConfigurationError
from field_expression import evaluate_text
from hopf_classical import InitialData, equivalence_check
from hopf_soliton import build_wave, conservation_check, residual_scan
from laurent_field import COEFFICIENT_DOMAINS, DEFAULT_TRUNCATION, field_settings
from mollifier_forge import (
    DEFAULT_GRID_POINTS,
    MollifierSpec,
    build_mollifier,
    refinement_study,
    save_mollifier,
    shift_mollifier,
    verify_basic_set_membership,
)
from soliton_profile import save_profile, solve_moment_system, verify_profile
from utils import ConfigUtils, FileUtils

logger = logging.getLogger(__name__)

# 实验注册表
EXPERIMENTS = [
    {"name": "mollifier", "description": "构造 B_n 磨光核并检查成员条件、L1 窗口与多项式再现",
     "parameters": ["n", "grid_points", "tolerance", "seed"]},
    {"name": "regularize", "description": "δ、H、x² 的正则化收敛表",
     "parameters": ["n_min", "n_max", "panel", "grid_points"]},
    {"name": "embed", "description": "光滑函数嵌入误差 sup|f∗φ_ε - f| 的阶",
     "parameters": ["n", "functions", "eps_start", "eps_stop", "points_per_decade", "probe_lo", "probe_hi"]},
    {"name": "product", "description": "H·δ 的正则化乘积对磨光核的依赖",
     "parameters": ["n", "shift", "panel", "eps_start", "eps_stop", "points_per_decade"]},
    {"name": "shock", "description": "激波 2vH(x - vt) 的守恒律与二维弱解恒等式",
     "parameters": ["v", "shock_samples", "seed"]},
    {"name": "soliton", "description": "孤立波剖面求解、弱残差阶与守恒律检查",
     "parameters": ["m", "u0", "v", "t", "panel", "eps_start", "eps_stop", "points_per_decade", "seed"]},
    {"name": "equivalence", "description": "守恒律三种形式在特征线解上的等价性",
     "parameters": ["background", "height", "a", "b", "t_max"]},
    {"name": "field-eval", "description": "在非阿基米德域中求值表达式",
     "parameters": ["expression", "coeff", "truncation"]},
]

EXPERIMENT_NAMES = tuple(item["name"] for item in EXPERIMENTS)
SLOPE_EXPERIMENTS = ("embed", "soliton")
RANDOMIZED_EXPERIMENTS = ("mollifier", "shock", "soliton")

DEFAULT_PANELS = {
    "regularize": ["wide_bump"],
    "product": ["bump_c0.3"],
    "soliton": ["bump_c0.3", "linear_bump", "quadratic_bump", "wide_bump"],
}

EMBED_SLOPE_ALLOWANCE = 0.2
EQUIVALENCE_MIN_SLOPE = 1.7
REPRODUCTION_TOLERANCE = 1e-7
PRODUCT_TOLERANCE = 1e-4


class ExperimentConfig(BaseModel):
    """一次实验运行的全部参数，优先级：命令行 > 配置文件 > 默认值"""

    model_config = ConfigDict(extra="forbid")

    experiment: str
    out: str = "reports"
    seed: Optional[int] = 0
    coeff: str = "exact"
    truncation: int = DEFAULT_TRUNCATION

    n: int = 3
    n_min: int = 2
    n_max: int = 6
    m: int = 1
    grid_points: int = DEFAULT_GRID_POINTS
    tolerance: float = 1e-8

    eps_start: float = 1e-1
    eps_stop: float = 1e-3
    points_per_decade: int = 5
    panel: List[str] = []
    probe_lo: float = -2.0
    probe_hi: float = 2.0
    functions: List[str] = ["sin", "exp", "gaussian"]

    shift: float = 0.5
    v: float = 1.0
    u0: float = 0.0
    t: float = 0.0
    shock_samples: int = 100

    background: float = 0.0
    height: float = 1.0
    a: float = -0.5
    b: float = 0.5
    t_max: float = 0.5

    expression: str = ""

    @field_validator("experiment")
    @classmethod
    def _known_experiment(cls, value: str) -> str:
        if value not in EXPERIMENT_NAMES:
            raise ValueError(f"unknown experiment {value!r}; expected one of {', '.join(EXPERIMENT_NAMES)}")
        return value

    @field_validator("coeff")
    @classmethod
    def _known_domain(cls, value: str) -> str:
        if value not in COEFFICIENT_DOMAINS:
            raise ValueError(f"coeff must be one of {COEFFICIENT_DOMAINS}")
        return value

    @field_validator("panel", "functions", mode="before")
    @classmethod
    def _split_list(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [item.strip() for item in value.split(",") if item.strip()]
        return value

    @field_validator("grid_points")
    @classmethod
    def _odd_grid(cls, value: int) -> int:
        if value < 3 or value % 2 == 0:
            raise ValueError("grid_points must be odd and >= 3")
        return value

    @field_validator("points_per_decade", "truncation", "shock_samples")
    @classmethod
    def _positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be >= 1")
        return value

    @model_validator(mode="after")
    def _check_grid(self) -> "ExperimentConfig":
        if not (self.eps_start > self.eps_stop > 0):
            raise ValueError(f"epsilon grid must be strictly decreasing and positive "
                             f"(eps_start={self.eps_start}, eps_stop={self.eps_stop})")
        if self.experiment in SLOPE_EXPERIMENTS and self.decades < 2.0 - 1e-9:
            raise ValueError(f"{self.experiment} fits slopes and needs at least 2 decades of epsilon, "
                             f"got {self.decades:.2f}")
        if self.experiment in RANDOMIZED_EXPERIMENTS and self.seed is None:
            raise ValueError(f"{self.experiment} uses randomized inputs and needs a seed")
        if self.experiment == "field-eval" and not self.expression.strip():
            raise ValueError("field-eval needs an expression")
        if self.n_min > self.n_max:
            raise ValueError("n_min must not exceed n_max")
        if self.a >= self.b:
            raise ValueError("a must be smaller than b")
        unknown = [name for name in self.panel if name not in panel_by_name()]
        if unknown:
            raise ValueError(f"unknown test functions {unknown}; expected among {sorted(panel_by_name())}")
        return self

    @property
    def decades(self) -> float:
        return math.log10(self.eps_start / self.eps_stop)

    @property
    def eps_grid(self) -> List[float]:
        """ε 从 eps_start 到 eps_stop 的几何网格 (严格递减)"""
        count = int(round(self.decades * self.points_per_decade)) + 1
        return [float(e) for e in np.geomspace(self.eps_start, self.eps_stop, max(count, 2))]

    def test_panel(self):
        names = self.panel or DEFAULT_PANELS.get(self.experiment, ["bump_c0.3"])
        panel = panel_by_name()
        return [panel[name] for name in names]


def load_experiment_config(
    experiment: str,
    config_path: Optional[str] = None,
    overrides: Optional[Dict[str, Any]] = None
) -> ExperimentConfig:
    """
    合并默认值、配置文件与命令行覆盖项

    Raises:
        ConfigurationError: 配置文件不存在
        pydantic.ValidationError: 参数非法
    """
    values: Dict[str, Any] = {}
    if config_path:
        values.update({key.replace("-", "_"): value for key, value in ConfigUtils.load_flat_config(config_path).items()})
    values.update({key.replace("-", "_"): value for key, value in (overrides or {}).items() if value is not None})
    values["experiment"] = experiment
    return ExperimentConfig(**values)


# ---- 各实验 ----

Outcome = Tuple[bool, Dict[str, Any], List[Dict[str, Any]]]


def _run_mollifier(config: ExperimentConfig, out: Path) -> Outcome:
    phi = build_mollifier(MollifierSpec(config.n, config.grid_points, config.tolerance))
    membership = verify_basic_set_membership(phi, config.n)
    files = save_mollifier(phi, str(out / f"mollifier_n{config.n}.csv"))
    window = refinement_study(config.n)

    rng = np.random.default_rng(config.seed)
    reproduction = []
    for degree in range(config.n + 1):
        check = polynomial_reproduction_check(rng.uniform(-1, 1, degree + 1), phi)
        reproduction.append({"degree": degree, **check})
    beyond = polynomial_reproduction_check(rng.uniform(-1, 1, config.n + 3), phi)

    reproduced = all(row["max_defect"] < REPRODUCTION_TOLERANCE for row in reproduction)
    predicted = beyond["prediction_gap"] < REPRODUCTION_TOLERANCE
    passed = (membership.real_symmetric and membership.support and membership.mass and membership.moments
              and phi.achieved_l1 >= 1.0 - config.tolerance and window["passed"] and reproduced and predicted)
    summary = {
        "mollifier": phi.summary(),
        "membership": membership.to_dict(),
        "l1_window_study": window,
        "polynomial_reproduction": reproduction,
        "degree_n_plus_2": beyond,
        "files": files,
    }
    return passed, summary, [{"x": x, "phi": value} for x, value in zip(phi.grid, phi.values)]


def _run_regularize(config: ExperimentConfig, out: Path) -> Outcome:
    distributions = {
        "delta": DiracDelta(0.0),
        "heaviside": Heaviside(0.0),
        "x2": PolynomialDistribution((0.0, 0.0, 1.0)),
    }
    panel = config.test_panel()
    reports = {}
    rows = []
    passed = True
    for name, T in distributions.items():
        report = regularization_report(T, config.n_max, panel, n_min=config.n_min, grid_points=config.grid_points)
        reports[name] = report.to_dict()
        passed = passed and report.pairing_decreasing and report.sup_decreasing
        if name == "x2":
            passed = passed and all(row["pairing_error"] <= 1e-10 for row in report.rows if row["n"] >= 2)
        rows.extend({"distribution": name, **row} for row in report.rows)
    return passed, {"panel": [tau.name for tau in panel], "reports": reports}, rows


def _run_embed(config: ExperimentConfig, out: Path) -> Outcome:
    probe = np.linspace(config.probe_lo, config.probe_hi, 5)
    eps_grid = config.eps_grid
    results = {}
    rows = []
    passed = True
    for n in range(1, config.n + 1):
        phi = build_mollifier(MollifierSpec(n, config.grid_points))
        threshold = n + 1 - EMBED_SLOPE_ALLOWANCE
        for name in config.functions:
            estimate = smooth_embedding_scan(name, phi, eps_grid, probe)
            ok = estimate.is_reliable() and estimate.slope >= threshold
            passed = passed and ok
            results[f"{name}|n={n}"] = {"order": estimate.to_dict(), "threshold": threshold, "passed": ok}
            rows.extend({"function": name, "n": n, "epsilon": eps, "error": value}
                        for eps, value in estimate.samples)
    return passed, {"slope_allowance": EMBED_SLOPE_ALLOWANCE, "results": results}, rows


def _run_product(config: ExperimentConfig, out: Path) -> Outcome:
    phi = build_mollifier(MollifierSpec(max(config.n, 1), config.grid_points))
    kernels = {"symmetric": phi, "shifted": shift_mollifier(phi, config.shift)}
    tau = config.test_panel()[0]
    result = regularized_product_experiment(kernels, config.eps_grid, tau)
    symmetric_gap = abs(result["limits"]["symmetric|symmetric"] - result["half_tau_zero"])
    cross = result["limits"]["symmetric|shifted"]
    cross_gap = abs(cross - result["half_tau_zero"])
    passed = symmetric_gap <= PRODUCT_TOLERANCE and cross_gap >= 0.05 * abs(result["tau_zero"])
    summary = {key: value for key, value in result.items() if key != "rows"}
    summary.update({"tau": tau.name, "symmetric_gap": symmetric_gap, "asymmetric_gap": cross_gap})
    return passed, summary, result["rows"]


def _run_shock(config: ExperimentConfig, out: Path) -> Outcome:
    rng = np.random.default_rng(config.seed)
    rows = []
    worst = 0.0
    while len(rows) < config.shock_samples:
        a, b = np.sort(rng.uniform(-3, 3, 2))
        t = float(rng.uniform(0.05, 3))
        if config.v * t in (a, b) or a == b:
            continue
        check = shock_conservation_check(config.v, float(a), float(b), t)
        worst = max(worst, abs(check.residual))
        rows.append({"a": float(a), "b": float(b), "t": t, **check.to_dict()})
    identity = weak_solution_identity(config.v, spacetime_panel())
    identity_worst = max(abs(value) for value in identity.values())
    passed = worst <= 1e-12 and identity_worst <= 1e-6
    summary = {"max_conservation_residual": worst, "weak_identity": identity, "max_weak_identity": identity_worst}
    return passed, summary, rows


def _run_soliton(config: ExperimentConfig, out: Path) -> Outcome:
    profile = solve_moment_system(config.m, seed=config.seed)
    certificate = verify_profile(profile)
    profile_path = save_profile(profile, str(out / f"profile_m{config.m}.json"))
    scan = residual_scan(profile, config.test_panel(), config.eps_grid, config.u0, config.v, config.t)

    eps = config.eps_grid[-1]
    wave = build_wave(config.u0, config.v, eps, profile)
    front = config.v * config.t
    checks = {
        "far": conservation_check(wave, front - 25 * eps, front + 30 * eps, config.t).to_dict(),
        "front": conservation_check(wave, front, front + 30 * eps, config.t).to_dict(),
        "interior": conservation_check(wave, front - eps, front + eps, config.t).to_dict(),
    }
    passed = (scan.passed and certificate["max_identity_error"] < 1e-8
              and checks["far"]["passed"] and checks["front"]["passed"])
    summary = {
        "profile": profile.to_dict(),
        "profile_file": profile_path,
        "certificate": certificate,
        "scan": scan.to_dict(),
        "conservation": checks,
    }
    return passed, summary, scan.rows()


def _run_equivalence(config: ExperimentConfig, out: Path) -> Outcome:
    data = InitialData.bump(config.background, config.height)
    t_grid = [float(t) for t in np.linspace(0.1, config.t_max, 5)]
    report = equivalence_check(data, config.a, config.b, t_grid)
    slopes = report.refinement.get("slopes", {})
    converging = all(slope is not None and slope >= EQUIVALENCE_MIN_SLOPE for slope in slopes.values())
    rows = [{"form": form, "step": h, "residual": value}
            for form, series in report.refinement.get("series", {}).items() for h, value in series]
    return report.passed and converging, report.to_dict(), rows


def _run_field_eval(config: ExperimentConfig, out: Path) -> Outcome:
    with field_settings(config.coeff, config.truncation):
        result = evaluate_text(config.expression)
    return True, {"expression": config.expression, **result}, []


RUNNERS: Dict[str, Callable[[ExperimentConfig, Path], Outcome]] = {
    "mollifier": _run_mollifier,
    "regularize": _run_regularize,
    "embed": _run_embed,
    "product": _run_product,
    "shock": _run_shock,
    "soliton": _run_soliton,
    "equivalence": _run_equivalence,
    "field-eval": _run_field_eval,
}


def exit_code_for(error: BaseException) -> int:
    """异常到进程退出码的映射"""
    if isinstance(error, ValidationError):
        return ConfigurationError.exit_code
    if isinstance(error, AsymptoticaError):
        return error.exit_code
    if isinstance(error, OSError):
        return ConfigurationError.exit_code
    return 3


class ExperimentRunner:
    """实验调度器"""

    def __init__(self):
        self.name = "asymptotica"
        self.version = "1.0.0"

    def get_experiments(self) -> List[Dict[str, Any]]:
        """返回可用的实验列表"""
        return EXPERIMENTS

    def run(self, config: ExperimentConfig) -> Dict[str, Any]:
        """
        运行实验并写出 JSON 摘要与 CSV 序列

        Returns:
            {"success", "passed", "summary", "files"}；失败时 {"success": False, "error", "error_type", "exit_code"}
        """
        try:
            out = FileUtils.ensure_report_dir(config.out)
            with field_settings(config.coeff, config.truncation):
                passed, summary, rows = RUNNERS[config.experiment](config, out)

            stem = config.experiment.replace("-", "_")
            report = {
                "experiment": config.experiment,
                "config": config.model_dump(),
                "passed": passed,
                "summary": summary,
            }
            files = {"json": FileUtils.write_json(str(out / f"{stem}_summary.json"), report)}
            if rows:
                files["csv"] = FileUtils.write_csv(str(out / f"{stem}.csv"), rows)
            logger.info(f"Experiment {config.experiment} finished: passed={passed}, files={files}")
            return {"success": True, "passed": passed, "summary": summary, "files": files}
        except Exception as e:
            logger.error(f"Experiment {config.experiment} failed: {e}")
            logger.debug(traceback.format_exc())
            return {
                "success": False,
                "error": str(e),
                "error_type": type(e).__name__,
                "exit_code": exit_code_for(e),
            }

    def call_experiment(self, name: str, config_path: Optional[str] = None,
                        overrides: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """按名称加载配置并运行"""
        try:
            config = load_experiment_config(name, config_path, overrides)
        except (ValidationError, ConfigurationError) as e:
            logger.error(f"Invalid configuration for {name}: {e}")
            return {"success": False, "error": str(e), "error_type": type(e).__name__,
                    "exit_code": ConfigurationError.exit_code}
        return self.run(config)


def run_experiment(config: ExperimentConfig) -> Dict[str, Any]:
    """快捷运行"""
    return ExperimentRunner().run(config)
