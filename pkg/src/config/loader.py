"""Simple configuration loading."""

from typing import Any, Dict, Optional

import structlog

from pydantic import ValidationError

from src.exceptions import ConfigurationError, InvalidConfigError

from .settings import Settings


logger = structlog.get_logger()


def load_config(overrides: Optional[Dict[str, Any]] = None) -> Settings:
    """Load configuration from environment variables and explicit overrides.

    Args:
        overrides: Values that take precedence over the environment
            (typically command-line flags). ``None`` entries are ignored.

    Returns:
        Configured Settings instance

    Raises:
        InvalidConfigError: If a value fails validation
        ConfigurationError: If configuration cannot be loaded otherwise
    """
    logger.info("Loading configuration from environment")

    explicit = {k: v for k, v in (overrides or {}).items() if v is not None}

    try:
        settings = Settings(**explicit)

        logger.info(
            "Configuration loaded successfully",
            debug=settings.debug,
            seed=settings.seed,
            jobs=settings.jobs,
            overrides=sorted(explicit),
        )

        return settings

    except ValidationError as e:
        logger.error("Invalid configuration", error=str(e))
        raise InvalidConfigError(f"Invalid configuration: {e}") from e
    except Exception as e:
        logger.error("Failed to load configuration", error=str(e))
        raise ConfigurationError(f"Configuration loading failed: {e}") from e
