import os
import sys
import logging

import colorlog

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


def setup_logging(level=None, log_path=None):
    """
    Configure the root logger: DEBUG file log plus colored stderr console

    Args:
        level: console level name or number (default PLOI_LOG_LEVEL)
        log_path: file log location (default PLOI_LOG_FILE)
    """
    from config import PLOI_LOG_FILE, PLOI_LOG_LEVEL

    log_path = log_path or PLOI_LOG_FILE
    level = level or PLOI_LOG_LEVEL
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.INFO

    # Get the root logger
    logger = logging.getLogger()
    logger.setLevel(logging.DEBUG)

    # Remove existing handlers to avoid duplicates
    for handler in logger.handlers[:]:
        logger.removeHandler(handler)
        handler.close()

    try:
        os.makedirs(os.path.dirname(os.path.abspath(log_path)), exist_ok=True)
        file_handler = logging.FileHandler(log_path, mode="w", encoding="utf-8")
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(file_handler)
    except OSError as e:
        log_path = None
        print(f"⚠️ File logging disabled: {e}", file=sys.stderr)

    stream_handler = colorlog.StreamHandler(sys.stderr)
    stream_handler.setLevel(level)
    stream_handler.setFormatter(colorlog.ColoredFormatter(
        "%(log_color)s%(levelname)-8s%(reset)s %(message)s",
        log_colors={
            "DEBUG": "cyan",
            "INFO": "green",
            "WARNING": "yellow",
            "ERROR": "red",
            "CRITICAL": "red,bg_white",
        },
    ))
    logger.addHandler(stream_handler)

    logging.debug("✅ Logging initialized")
    logging.debug(f"Debug log location: {log_path}")
    return log_path


def enable_debug_console():
    """Drop every console handler to DEBUG (settings advanced.debug_logging)"""
    for handler in logging.getLogger().handlers:
        if not isinstance(handler, logging.FileHandler):
            handler.setLevel(logging.DEBUG)
    logging.debug("Console debug logging enabled")


def format_duration(seconds):
    if seconds < 1:
        return f"{seconds * 1000:.0f} ms"
    m, s = divmod(seconds, 60)
    return f"{int(m)}m {s:.1f}s" if m else f"{s:.1f}s"
