"""Agent-based simulation of citizen mobilisation, eNGO pressure, media framing
and a two-stage political decision on a land-use proposal."""

from .config import SimulationConfig, config_from_dict, load_config
from .engine import RunSummary, initialise, run, step
from .errors import ConfigurationError, ContractError, NumericError, UnknownIdError
from .politics import Decision

__version__ = "0.1.0"

__all__ = [
    "SimulationConfig", "config_from_dict", "load_config", "RunSummary", "initialise", "run", "step",
    "ConfigurationError", "ContractError", "NumericError", "UnknownIdError", "Decision",
]
