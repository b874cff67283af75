"""
Timing utilities.

Every service operation is wrapped in `timeit` so that slow evolutions and
scans show up in the logs with their duration.
"""

import time
from functools import wraps
from typing import Callable, Any

from spintop.config import get_settings
from spintop.utils.logger import get_logger


logger = get_logger(__name__)


def timeit(operation_name: str) -> Callable:
    """
    Decorator to measure and log execution time.

    Logs the duration at DEBUG and emits a WARNING when it exceeds
    SLOW_OPERATION_MS.

    Args:
        operation_name: Name of the operation being timed

    Returns:
        Decorated function

    Example:
        >>> @timeit("kernel_scan")
        >>> def scan(request):
        >>>     ...
    """
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs) -> Any:
            start_time = time.perf_counter()
            try:
                return func(*args, **kwargs)
            finally:
                duration_ms = (time.perf_counter() - start_time) * 1000
                threshold_ms = get_settings().SLOW_OPERATION_MS

                logger.debug(
                    f"{operation_name} completed",
                    extra={
                        "operation": operation_name,
                        "duration_ms": round(duration_ms, 2),
                        "function": func.__name__
                    }
                )

                if duration_ms > threshold_ms:
                    logger.warning(
                        f"Slow operation detected: {operation_name}",
                        extra={
                            "operation": operation_name,
                            "duration_ms": round(duration_ms, 2),
                            "threshold_ms": threshold_ms
                        }
                    )

        return wrapper

    return decorator
