from .error_handler import (
    ExitCode,
    PWGraphError,
    SystemErrorHandler,
    exit_code_for,
    system_error_handler,
    with_error_handling,
)

__all__ = [
    "ExitCode",
    "PWGraphError",
    "SystemErrorHandler",
    "exit_code_for",
    "system_error_handler",
    "with_error_handling",
]
