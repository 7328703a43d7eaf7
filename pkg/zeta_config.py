"""
Configuration for the zeta-gaps toolkit
"""

import logging
import os
import sys
from typing import Any, Dict, Optional

import structlog
from dotenv import load_dotenv

ARTIFACT_NAME = "zeta-gaps"
ARTIFACT_VERSION = "1.0.0"

# Named numerical tolerances and budgets
TOLERANCE_SETTINGS = {
    "quadrature_tol": {
        "name": "quadrature_tol",
        "default": 1e-10,
        "description": "Absolute error target of the adaptive Gauss-Kronrod engine",
        "used_by": "wirtinger_constants, gap_bounds, ineq_verify"
    },
    "quadrature_max_panels": {
        "name": "quadrature_max_panels",
        "default": 4000,
        "description": "Panel budget of one adaptive integration",
        "used_by": "wirtinger_constants"
    },
    "refine_tol": {
        "name": "refine_tol",
        "default": 1e-9,
        "description": "Bisection width at which a zero ordinate is accepted",
        "used_by": "hardy_z"
    },
    "margin_floor": {
        "name": "margin_floor",
        "default": 1e-8,
        "description": "Quadrature noise floor below which a negative margin is a violation",
        "used_by": "ineq_verify"
    },
    "euler_tail": {
        "name": "euler_tail",
        "default": 1e-16,
        "description": "Relative tail at which an Euler factor's inner series stops",
        "used_by": "rmt_constants"
    },
    "euler_max_terms": {
        "name": "euler_max_terms",
        "default": 400,
        "description": "Hard cap on inner-series terms per prime",
        "used_by": "rmt_constants"
    },
    "prime_cutoff": {
        "name": "prime_cutoff",
        "default": 1_000_000,
        "description": "Largest prime kept in the truncated Euler product a(k)",
        "used_by": "rmt_constants, hardy_z"
    },
    "grid_factor": {
        "name": "grid_factor",
        "default": 0.25,
        "description": "Scan step as a fraction of the local mean zero spacing",
        "used_by": "hardy_z"
    },
    "moment_panels": {
        "name": "moment_panels",
        "default": 200_000,
        "description": "Simpson panels for empirical moment integrals",
        "used_by": "hardy_z"
    },
    "moment_max_panels": {
        "name": "moment_max_panels",
        "default": 5_000_000,
        "description": "Panel budget for empirical moment integrals",
        "used_by": "hardy_z"
    },
    "derivative_step": {
        "name": "derivative_step",
        "default": 1e-4,
        "description": "Central-difference step for Z'(t)",
        "used_by": "hardy_z"
    },
    "t_lower": {
        "name": "t_lower",
        "default": 10.0,
        "description": "Lower cutoff of every scan and moment integral",
        "used_by": "hardy_z"
    }
}

# Default configuration
DEFAULT_QUADRATURE_TOL = TOLERANCE_SETTINGS["quadrature_tol"]["default"]
DEFAULT_QUADRATURE_MAX_PANELS = TOLERANCE_SETTINGS["quadrature_max_panels"]["default"]
DEFAULT_REFINE_TOL = TOLERANCE_SETTINGS["refine_tol"]["default"]
DEFAULT_MARGIN_FLOOR = TOLERANCE_SETTINGS["margin_floor"]["default"]
DEFAULT_EULER_TAIL = TOLERANCE_SETTINGS["euler_tail"]["default"]
DEFAULT_EULER_MAX_TERMS = TOLERANCE_SETTINGS["euler_max_terms"]["default"]
DEFAULT_PRIME_CUTOFF = TOLERANCE_SETTINGS["prime_cutoff"]["default"]
DEFAULT_GRID_FACTOR = TOLERANCE_SETTINGS["grid_factor"]["default"]
DEFAULT_MOMENT_PANELS = TOLERANCE_SETTINGS["moment_panels"]["default"]
DEFAULT_MOMENT_MAX_PANELS = TOLERANCE_SETTINGS["moment_max_panels"]["default"]
DEFAULT_DERIVATIVE_STEP = TOLERANCE_SETTINGS["derivative_step"]["default"]
DEFAULT_T_LOWER = TOLERANCE_SETTINGS["t_lower"]["default"]
DEFAULT_SEED = 20240101
DEFAULT_LOG_LEVEL = "WARNING"

load_dotenv()


def get_tolerance_config(name: str) -> Dict[str, Any]:
    """Get the registry entry for a named tolerance"""
    if name not in TOLERANCE_SETTINGS:
        raise ValueError(f"Unknown tolerance: {name}. Available tolerances: {list(TOLERANCE_SETTINGS.keys())}")

    return TOLERANCE_SETTINGS[name]


def default_tolerances() -> Dict[str, float]:
    """Every named tolerance at its default value"""
    return {name: setting["default"] for name, setting in TOLERANCE_SETTINGS.items()}


def parse_tolerance_override(text: str) -> Dict[str, float]:
    """Parse one ``name=value`` override, keeping integer settings integral"""
    if "=" not in text:
        raise ValueError(f"Tolerance override must look like name=value, got {text!r}")

    name, raw = (part.strip() for part in text.split("=", 1))
    default = get_tolerance_config(name)["default"]
    value = int(float(raw)) if isinstance(default, int) else float(raw)
    if value <= 0:
        raise ValueError(f"Tolerance {name} must be positive, got {raw}")
    return {name: value}


def get_threads(cli_value: Optional[int] = None) -> int:
    """Worker count: --threads, then ZETA_GAPS_THREADS, then 1"""
    if cli_value is not None:
        return max(1, cli_value)

    env_value = os.getenv("ZETA_GAPS_THREADS")
    if env_value:
        try:
            return max(1, int(env_value))
        except ValueError:
            raise ValueError(f"ZETA_GAPS_THREADS must be an integer, got {env_value!r}")
    return 1


def get_prime_cutoff() -> int:
    env_value = os.getenv("ZETA_GAPS_PRIME_CUTOFF")
    return int(env_value) if env_value else DEFAULT_PRIME_CUTOFF


def _route_structlog() -> None:
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.processors.TimeStamper(fmt="iso", utc=True),
            structlog.processors.KeyValueRenderer(key_order=["event", "logger", "level"]),
        ],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


def configure_logging(level: Optional[str] = None) -> None:
    """Route structlog through stdlib logging on stderr"""
    level_name = (level or os.getenv("LOG_LEVEL") or DEFAULT_LOG_LEVEL).upper()

    logging.basicConfig(
        level=getattr(logging, level_name, logging.WARNING),
        stream=sys.stderr,
        format="%(message)s",
        force=True,
    )
    _route_structlog()


# library use stays quiet until configure_logging: events go through stdlib logging at WARNING
_route_structlog()


def list_available_settings():
    """List all tolerances with descriptions"""
    print(f"{ARTIFACT_NAME} {ARTIFACT_VERSION} tolerances:")
    print("=" * 50)

    for name, config in TOLERANCE_SETTINGS.items():
        print(f"\nSetting: {name}")
        print(f"Default: {config['default']}")
        print(f"Description: {config['description']}")
        print(f"Used by: {config['used_by']}")
        print("-" * 30)


if __name__ == "__main__":
    list_available_settings()
