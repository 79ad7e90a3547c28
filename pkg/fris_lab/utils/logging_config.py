import logging
from pathlib import Path
from typing import Optional


def setup_logging(level: int = logging.INFO, log_file: Optional[str] = None) -> None:
    """Configure logging for the simulator.

    Args:
        level: Root log level, chosen on the command line.
        log_file: Optional path of a UTF-8 log file written next to the console output.
    """
    handlers: list[logging.Handler] = [logging.StreamHandler()]
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(filename=log_file, encoding="utf-8"))

    logging.basicConfig(
        level=level,
        format='%(asctime)s | %(levelname)s | %(name)s | %(message)s',
        handlers=handlers,
        force=True,
    )

    logger = logging.getLogger(__name__)
    logger.debug("🚀 Logging initialized at level: %s", logging.getLevelName(level))
    if log_file:
        logger.debug("📂 Writing log file: %s", log_file)
