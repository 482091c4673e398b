import logging
import math
from fractions import Fraction

import numpy as np
import pandas as pd
import pytest

from errors import ConfigurationError
from utils import ConfigUtils, FileUtils, configure_logging, to_jsonable


def test_to_jsonable():
    value = {
        "b": np.float64(1.5),
        "a": [Fraction(1, 3), np.arange(2)],
        "z": complex(1, -2),
        "inf": math.inf,
    }
    assert to_jsonable(value) == {
        "a": ["1/3", [0, 1]],
        "b": 1.5,
        "inf": "inf",
        "z": {"real": 1.0, "imag": -2.0},
    }


def test_parse_overrides():
    assert ConfigUtils.parse_overrides(["N=3", " expression = st(r + 1) "]) == {"n": "3", "expression": "st(r + 1)"}
    with pytest.raises(ConfigurationError):
        ConfigUtils.parse_overrides(["seed"])


def test_load_flat_config(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("# comment\nN=5\npanel=wide_bump\n", encoding="utf-8")
    assert ConfigUtils.load_flat_config(str(path)) == {"n": "5", "panel": "wide_bump"}


def test_write_reports(tmp_path):
    json_path = FileUtils.write_json(str(tmp_path / "nested" / "report.json"), {"x": Fraction(1, 2)})
    assert FileUtils.read_json(json_path) == {"x": "1/2"}
    csv_path = FileUtils.write_csv(str(tmp_path / "rows.csv"), [{"eps": 0.1, "error": 1e-3}])
    frame = pd.read_csv(csv_path)
    assert list(frame.columns) == ["eps", "error"]
    assert frame["error"][0] == pytest.approx(1e-3)


def test_ensure_report_dir(tmp_path):
    path = FileUtils.ensure_report_dir(str(tmp_path / "reports" / "n3"))
    assert path.is_dir()
    assert FileUtils.ensure_report_dir(path) == path
    occupied = tmp_path / "taken"
    occupied.write_text("not a directory", encoding="utf-8")
    with pytest.raises(ConfigurationError):
        FileUtils.ensure_report_dir(occupied)


@pytest.fixture
def root_logger():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield root
    for handler in root.handlers:
        if handler not in handlers:
            handler.close()
    root.handlers[:] = handlers
    root.setLevel(level)


def test_configure_logging_writes_debug_trace(tmp_path, root_logger):
    log_file = tmp_path / "logs" / "run.log"
    logger = configure_logging("warning", str(log_file))
    assert logger.name == "asymptotica"
    logging.getLogger("mollifier_forge").debug("LP grid has 401 points")
    for handler in root_logger.handlers:
        handler.flush()
    assert "DEBUG   [mollifier_forge] LP grid has 401 points" in log_file.read_text(encoding="utf-8")
    console = [h for h in root_logger.handlers if not isinstance(h, logging.FileHandler)]
    assert [h.level for h in console] == [logging.WARNING]


def test_configure_logging_rejects_unknown_level():
    with pytest.raises(ConfigurationError):
        configure_logging("verbose")
