"""
Environment configuration for subdiv-repro.

Values come from the process environment, optionally seeded from a .env file.
"""

import os
import sys
import logging

from dotenv import load_dotenv

from errors import ConfigError

load_dotenv()


def _int_setting(name: str, default: int, minimum: int = 0) -> int:
    raw = os.getenv(name, "")
    if not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}")
    if value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {value}")
    return value


LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()

# Degree searches stop here unless the caller passes its own cap
DEFAULT_CAP = _int_setting("SUBDIV_CAP", 10)

CASCADE_MAX_STEPS = _int_setting("SUBDIV_CASCADE_MAX_STEPS", 12)

# Toolset definitions for the MCP server
ALL_TOOLSETS = ["analysis", "schemes"]
DEFAULT_TOOLSETS = os.getenv("SUBDIV_TOOLSETS", ",".join(ALL_TOOLSETS))


def configure_logging(level: str = None) -> logging.Logger:
    """Configure root logging once; stdout stays reserved for reports and the stdio protocol"""
    level_name = (level or LOG_LEVEL).upper()
    logging.basicConfig(
        level=getattr(logging, level_name, logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)]
    )
    return logging.getLogger("subdiv-repro")
