"""
Writers for run artifacts: CSV tables with a parameter header, the YAML run
manifest, and plain-text reports rendered from jinja2 templates.
"""

import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

import pandas as pd
import yaml
from jinja2 import Environment, FileSystemLoader, StrictUndefined

from .core.log import get_logger
from .core.params import DerivedScales

logger = get_logger(__name__)

TEMPLATE_DIR = Path(__file__).resolve().parent.parent / "templates"
FLOAT_FORMAT = "%.12g"


def _header_value(value: Any) -> str:
    if value is None:
        return "none"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def save_csv(frame: pd.DataFrame, output_file: Path, header: Mapping[str, Any], index: bool = False) -> Path:
    """Write ``frame`` after a ``# key = value`` comment block."""
    output_file = Path(output_file)
    output_file.parent.mkdir(parents=True, exist_ok=True)
    with open(output_file, "w", encoding="utf-8", newline="") as f:
        for key, value in header.items():
            f.write(f"# {key} = {_header_value(value)}\n")
        frame.to_csv(f, index=index, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info("csv_written", path=str(output_file), rows=len(frame))
    return output_file


def read_csv(input_file: Path) -> pd.DataFrame:
    """Read a table written by ``save_csv``, skipping the comment block."""
    return pd.read_csv(input_file, comment="#")


def grid_in_units(frame: pd.DataFrame, units: str, scales: Optional[DerivedScales] = None) -> pd.DataFrame:
    """Relabel a reduced grid's axes in absolute units (m/s, µm) when asked."""
    if units == "reduced":
        return frame
    if units != "absolute":
        raise ValueError(f"Unsupported units: {units}")
    if scales is None:
        raise ValueError("absolute units need derived scales")
    converted = frame.copy()
    converted.index = pd.Index(frame.index.to_numpy(dtype=float) * scales.velocity_unit, name="v_m_per_s")
    converted.columns = pd.Index(frame.columns.to_numpy(dtype=float) * scales.distance_unit, name="ell_um")
    return converted


def save_grid(frame: pd.DataFrame, output_file: Path, header: Mapping[str, Any]) -> Path:
    """Grid CSV: first column the velocity axis, header row the distance axis."""
    table = frame.copy()
    table.columns = [FLOAT_FORMAT % c for c in table.columns]
    table = table.reset_index()
    return save_csv(table, output_file, header, index=False)


@dataclass
class RunManifest:
    """Record of one command invocation and the files it produced."""
    command: str
    output_dir: str
    config_path: Optional[str] = None
    parameters: Dict[str, Any] = field(default_factory=dict)
    outputs: List[str] = field(default_factory=list)
    timestamp: float = 0

    def __post_init__(self):
        if self.timestamp == 0:
            self.timestamp = time.time()

    def add_output(self, path: Path) -> Path:
        self.outputs.append(Path(path).name)
        return path

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "config": self.config_path,
            "output_dir": self.output_dir,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime(self.timestamp)) + "Z",
            "parameters": {k: _header_value(v) if not isinstance(v, (int, float)) else v
                           for k, v in self.parameters.items()},
            "outputs": list(self.outputs),
        }

    def save(self) -> Path:
        path = Path(self.output_dir) / "manifest.yaml"
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            yaml.safe_dump(self.to_dict(), f, sort_keys=False, allow_unicode=True)
        logger.debug("manifest_written", path=str(path), outputs=len(self.outputs))
        return path


_environment: Optional[Environment] = None


def _template_environment() -> Environment:
    global _environment
    if _environment is None:
        _environment = Environment(
            loader=FileSystemLoader(str(TEMPLATE_DIR)),
            undefined=StrictUndefined,
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
        )
        _environment.filters["fmt"] = lambda value, spec=".6g": format(value, spec)
    return _environment


def render_report(template_name: str, **context: Any) -> str:
    """Render one of the text report templates."""
    return _template_environment().get_template(template_name).render(**context)
