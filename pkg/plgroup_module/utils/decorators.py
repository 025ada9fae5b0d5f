# plgroup_module/utils/decorators.py
"""
Decorators for pipeline stage tracking and power escalation
"""

import time
import logging
from functools import wraps

from ..core.errors import BudgetExceeded, VerificationError


def track_stage(label):
    """
    Decorator to log the duration and outcome of a pipeline stage

    Args:
        label (str): Stage label shown in the log line

    Returns:
        Decorator function
    """
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.time()
            try:
                result = func(*args, **kwargs)
                elapsed = (time.time() - start_time) * 1000
                logging.debug(f"STAGE [{label}] {func.__name__} - SUCCESS ({elapsed:.0f} ms)")
                return result
            except Exception as e:
                elapsed = (time.time() - start_time) * 1000
                logging.warning(f"STAGE [{label}] {func.__name__} - ERROR ({elapsed:.0f} ms): {e}")
                raise

        return wrapper
    return decorator


def _scale_cap(max_scale):
    if max_scale:
        return int(max_scale)
    from settings_manager import get_setting
    return int(get_setting("powers.max_power", 2 ** 20))


def escalate(label):
    """
    Decorator turning a "sufficiently high power" step into a verified loop

    The wrapped function takes a ``scale`` keyword. Each VerificationError
    doubles the scale; once it passes ``max_scale`` (keyword, default the
    powers.max_power setting) BudgetExceeded is raised.

    Args:
        label (str): Step name used in log lines and the error message
    """
    def decorator(func):
        @wraps(func)
        def wrapper(*args, scale=1, max_scale=None, **kwargs):
            cap = _scale_cap(max_scale)
            last_error = None
            while scale <= cap:
                try:
                    return func(*args, scale=scale, **kwargs)
                except VerificationError as e:
                    last_error = e
                    logging.debug(f"⚠️ {label}: check failed at scale {scale} ({e}), doubling")
                    scale *= 2
            raise BudgetExceeded(f"{label} did not verify below scale {cap}",
                                 step=label, last_error=last_error)

        return wrapper
    return decorator
