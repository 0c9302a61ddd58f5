import logging
import sys

from app.core.config import get_settings


def configure_logging(verbosity: int = 0) -> None:
    """
    Route log records to stderr so stdout carries only the report

    Args:
        verbosity: Number of -v flags; 1 lowers the level to INFO, 2 or more to DEBUG
    """
    settings = get_settings()
    level = logging.DEBUG if settings.DEBUG else getattr(logging, settings.LOG_LEVEL.upper(), logging.WARNING)
    if verbosity == 1:
        level = min(level, logging.INFO)
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
        force=True,
    )


def main() -> None:
    """Entry point for the twist obstruction engine CLI"""
    from app.cli import cli

    cli(prog_name="twist-engine")


if __name__ == "__main__":
    main()
