"""
Logging configuration and utilities.

Structured logging for the simulator. JSON lines by default, a colored
console format for local work. A context variable carries the current run
(CLI: command and run_id) or request (API: request_id, method, path) so that
every record emitted while a command or request is active can be correlated.
"""

import logging
import json
import sys
import traceback
from datetime import datetime, timezone
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional, Dict, Any, TextIO
from contextvars import ContextVar


LOG_MAX_BYTES = 20 * 1024 * 1024  # 20 MB
LOG_BACKUP_COUNT = 5

log_context_var: ContextVar[Optional[Dict[str, Any]]] = ContextVar(
    "log_context",
    default=None
)

# Attributes every LogRecord carries; anything else came in through `extra`.
_RESERVED_ATTRS = frozenset({
    "name", "msg", "args", "created", "filename", "funcName",
    "levelname", "levelno", "lineno", "module", "msecs",
    "message", "pathname", "process", "processName",
    "relativeCreated", "thread", "threadName", "exc_info",
    "exc_text", "stack_info", "taskName",
})


class JSONFormatter(logging.Formatter):
    """
    Formatter that outputs one JSON object per record.

    Fields:
        - timestamp: ISO 8601 UTC timestamp
        - level, logger_name, message
        - context: active run or request context (if any)
        - exception: type, message and traceback (if any)
        - extra: fields passed through `extra=`
        - source: file, line and function for DEBUG records
    """

    def format(self, record: logging.LogRecord) -> str:
        """
        Format a log record as JSON.

        Args:
            record: The log record to format

        Returns:
            JSON string representing the log entry
        """
        log_entry: Dict[str, Any] = {
            "timestamp": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
            "level": record.levelname,
            "logger_name": record.name,
            "message": record.getMessage(),
        }

        context = log_context_var.get()
        if context:
            log_entry["context"] = {k: v for k, v in context.items() if v is not None}

        if record.exc_info:
            log_entry["exception"] = {
                "type": record.exc_info[0].__name__,
                "message": str(record.exc_info[1]),
                "traceback": traceback.format_exception(*record.exc_info)
            }

        extra_fields = {
            key: value for key, value in record.__dict__.items()
            if key not in _RESERVED_ATTRS
        }
        if extra_fields:
            log_entry["extra"] = extra_fields

        if record.levelno == logging.DEBUG:
            log_entry["source"] = {
                "file": record.filename,
                "line": record.lineno,
                "function": record.funcName
            }

        return json.dumps(log_entry, default=str)


class ConsoleFormatter(logging.Formatter):
    """
    Human-readable formatter with ANSI colors when the stream is a tty.
    """

    COLORS = {
        "DEBUG": "\033[36m",
        "INFO": "\033[32m",
        "WARNING": "\033[33m",
        "ERROR": "\033[31m",
        "CRITICAL": "\033[35m",
        "RESET": "\033[0m"
    }

    def __init__(self, stream: TextIO = sys.stderr) -> None:
        super().__init__()
        self._colorize = hasattr(stream, "isatty") and stream.isatty()

    def format(self, record: logging.LogRecord) -> str:
        """Format log record for console output."""
        context = log_context_var.get()

        message = record.getMessage()
        if context:
            tag = context.get("run_id") or context.get("request_id")
            if tag:
                message = f"[{str(tag)[:8]}] {message}"

        if self._colorize:
            color = self.COLORS.get(record.levelname, "")
            level = f"{color}{record.levelname:8s}{self.COLORS['RESET']}"
        else:
            level = f"{record.levelname:8s}"

        timestamp = datetime.fromtimestamp(record.created).strftime("%Y-%m-%d %H:%M:%S")
        formatted = f"[{timestamp}] {level} [{record.name}] {message}"

        if record.exc_info:
            formatted += "\n" + self.formatException(record.exc_info)

        return formatted


def setup_logging(
    log_level: str = "INFO",
    use_json: bool = True,
    stream: Optional[TextIO] = None,
    log_file: Optional[str] = None,
) -> None:
    """
    Configure the root logger.

    Installs one stream handler and, when `log_file` is given, a rotating
    JSON file handler. Calling it again replaces previous handlers.

    Args:
        log_level: The logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        use_json: Whether to format the stream handler as JSON
        stream: Target stream (defaults to stderr; stdout carries CLI results)
        log_file: Optional path of a rotating log file
    """
    stream = stream or sys.stderr
    numeric_level = getattr(logging, log_level.upper(), logging.INFO)

    root_logger = logging.getLogger()
    root_logger.setLevel(numeric_level)
    root_logger.handlers.clear()

    console_handler = logging.StreamHandler(stream)
    console_handler.setLevel(numeric_level)
    console_handler.setFormatter(JSONFormatter() if use_json else ConsoleFormatter(stream))
    root_logger.addHandler(console_handler)

    if log_file:
        path = Path(log_file)
        path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = RotatingFileHandler(
            filename=path,
            maxBytes=LOG_MAX_BYTES,
            backupCount=LOG_BACKUP_COUNT,
            encoding="utf-8"
        )
        file_handler.setLevel(numeric_level)
        file_handler.setFormatter(JSONFormatter())
        root_logger.addHandler(file_handler)

    root_logger.debug(
        "Logging initialized",
        extra={
            "log_level": log_level,
            "log_file": log_file,
            "json_format": use_json
        }
    )


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger for a module.

    Args:
        name: The name for the logger (typically __name__)

    Returns:
        A logger instance

    Example:
        >>> from spintop.utils.logger import get_logger
        >>> logger = get_logger(__name__)
        >>> logger.info("Evolving state")
    """
    return logging.getLogger(name)


def set_run_context(run_id: str, command: str, **kwargs) -> None:
    """
    Set the context of the CLI command currently executing.

    Args:
        run_id: Identifier of this invocation
        command: Subcommand name
        **kwargs: Additional context fields
    """
    log_context_var.set({"run_id": run_id, "command": command, **kwargs})


def set_request_context(
    request_id: Optional[str] = None,
    method: Optional[str] = None,
    path: Optional[str] = None,
    **kwargs
) -> None:
    """
    Set the context of the HTTP request currently being served.

    Args:
        request_id: Request correlation ID
        method: HTTP method
        path: Request path
        **kwargs: Additional context fields
    """
    log_context_var.set({
        "request_id": request_id,
        "method": method,
        "path": path,
        **kwargs
    })


def clear_log_context() -> None:
    """Clear the current run or request context."""
    log_context_var.set(None)


def log_exception(
    logger: logging.Logger,
    message: str,
    exc_info: bool = True,
    **kwargs
) -> None:
    """
    Log an exception with traceback and structured fields.

    Args:
        logger: The logger to use
        message: What was being done when the exception occurred
        exc_info: Whether to include exception info
        **kwargs: Additional fields
    """
    logger.error(message, exc_info=exc_info, extra=kwargs)


def flush_logs() -> None:
    """Flush all root handlers."""
    for handler in logging.root.handlers:
        handler.flush()
