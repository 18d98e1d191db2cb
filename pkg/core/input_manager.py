import argparse
import json
import logging
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, NoReturn, Sequence

from config.constants import ExperimentDefaults, PeanoBakerConfig, ReportConfig
from core.errors import ConfigError


class Commands:
    """Names of the experiments the command line can run."""
    ANALYZE = "analyze"
    THRESHOLDS = "thresholds"
    SWEEP = "sweep"
    TRAJECTORY = "trajectory"
    DIRECTIONS = "directions"
    PEANO_BAKER = "peano-baker"
    SMOOTH = "smooth"
    NONPERIODIC = "nonperiodic"

    ALL = (ANALYZE, THRESHOLDS, SWEEP, TRAJECTORY, DIRECTIONS, PEANO_BAKER, SMOOTH, NONPERIODIC)


@dataclass
class ExperimentConfig:
    command: str
    c: float = ExperimentDefaults.C
    epsilon: float | None = None
    epsilons: tuple[float, ...] = ExperimentDefaults.EPSILONS
    step: float = ExperimentDefaults.STEP
    horizon: float = ExperimentDefaults.HORIZON
    terms: int = PeanoBakerConfig.DEFAULT_TERMS
    output_path: str | None = None
    format: str = ReportConfig.DEFAULT_FORMAT
    seed: int = ExperimentDefaults.SEED
    dt: float = ExperimentDefaults.SAMPLE_DT
    x0: str | None = None
    precision: float = ExperimentDefaults.THRESHOLD_PRECISION
    c_min: float = ExperimentDefaults.SWEEP_C_MIN
    c_max: float = ExperimentDefaults.SWEEP_C_MAX
    points: int = ExperimentDefaults.SWEEP_POINTS
    drift: str | dict[str, Any] | None = None
    verbose: bool = False


class _RaisingParser(argparse.ArgumentParser):
    """ArgumentParser that reports problems as ConfigError instead of exiting"""

    def error(self, message: str) -> NoReturn:
        raise ConfigError("arguments", message)


# Config document keys that differ from the dataclass field names
_DOCUMENT_ALIASES = {"K": "terms", "out": "output_path", "output": "output_path"}


class InputManager:
    """Builds an ExperimentConfig from command-line flags and an optional JSON document.

    Flags override document values, which override the built-in defaults.
    """

    def __init__(self) -> None:
        self.parser = self._build_parser()

    @staticmethod
    def _build_parser() -> argparse.ArgumentParser:
        parser = _RaisingParser(
            prog="cooperative-lab",
            description="Numerical experiments on unstable strongly cooperative 2x2 linear systems.",
        )
        parser.add_argument("command", choices=Commands.ALL, help="experiment to run")
        parser.add_argument("--config", dest="config_path", default=None, help="JSON config document")
        parser.add_argument("--c", type=float, default=None, help="coupling parameter c > 0")
        parser.add_argument("--epsilon", type=float, default=None, help="smoothing width in (0, 1/4)")
        parser.add_argument("--step", type=float, default=None, help="RK4 step")
        parser.add_argument("--horizon", type=float, default=None, help="final time")
        parser.add_argument("--terms", "--K", dest="terms", type=int, default=None, help="Picard terms K")
        parser.add_argument("--out", dest="output_path", default=None, help="report file (stdout if omitted)")
        parser.add_argument("--format", choices=ReportConfig.FORMATS, default=None)
        parser.add_argument("--seed", type=int, default=None, help="seed for randomized inputs")
        parser.add_argument("--dt", type=float, default=None, help="sampling interval")
        parser.add_argument("--x0", default=None, help='initial value "x1,x2" or "random"')
        parser.add_argument("--precision", type=float, default=None, help="threshold bracket width")
        parser.add_argument("--c-min", dest="c_min", type=float, default=None)
        parser.add_argument("--c-max", dest="c_max", type=float, default=None)
        parser.add_argument("--points", type=int, default=None)
        parser.add_argument("--drift", default=None, help='"default" or "zero"')
        parser.add_argument("--verbose", action="store_true", default=None, help="debug logging")
        return parser

    def parse(self, argv: Sequence[str]) -> ExperimentConfig:
        namespace = self.parser.parse_args(list(argv))
        values: dict[str, Any] = {}

        if namespace.config_path is not None:
            values.update(self.load_document(namespace.config_path))

        for key, value in vars(namespace).items():
            if key != "config_path" and value is not None:
                values[key] = value

        config = ExperimentConfig(**values)
        logging.debug(f"Experiment config: {config}")
        return config

    @staticmethod
    def load_document(path: str) -> dict[str, Any]:
        """Read a JSON object whose keys name ExperimentConfig fields."""
        try:
            document = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as error:
            raise ConfigError("config", f"cannot read {path}: {error}") from error
        except json.JSONDecodeError as error:
            raise ConfigError("config", f"{path} is not valid JSON: {error}") from error
        if not isinstance(document, dict):
            raise ConfigError("config", "the config document must be a JSON object")

        known = {f.name: f for f in fields(ExperimentConfig)}
        values: dict[str, Any] = {}
        for raw_key, value in document.items():
            key = _DOCUMENT_ALIASES.get(raw_key, raw_key.replace("-", "_"))
            if key not in known or key == "command":
                raise ConfigError(raw_key, "unknown config key")
            values[key] = InputManager._coerce(key, value)
        return values

    @staticmethod
    def _coerce(key: str, value: Any) -> Any:
        match key:
            case "terms" | "seed" | "points":
                if isinstance(value, bool) or not isinstance(value, int):
                    raise ConfigError(key, f"expected an integer, got {value!r}")
                return value
            case "c" | "epsilon" | "step" | "horizon" | "dt" | "precision" | "c_min" | "c_max":
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise ConfigError(key, f"expected a number, got {value!r}")
                return float(value)
            case "epsilons":
                if not isinstance(value, list) or not all(isinstance(v, (int, float)) for v in value):
                    raise ConfigError(key, "expected a list of numbers")
                return tuple(float(v) for v in value)
            case "x0":
                if isinstance(value, list) and len(value) == 2:
                    return f"{value[0]},{value[1]}"
                if not isinstance(value, str):
                    raise ConfigError(key, 'expected "x1,x2", "random" or a two-element list')
                return value
            case "drift":
                if not isinstance(value, (str, dict)):
                    raise ConfigError(key, "expected a built-in name or {\"times\": [...], \"values\": [...]}")
                return value
            case "verbose":
                return bool(value)
            case _:
                if not isinstance(value, str):
                    raise ConfigError(key, f"expected a string, got {value!r}")
                return value
