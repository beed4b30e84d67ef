import logging
from datetime import datetime
from enum import IntEnum
from functools import wraps
from typing import Any, Callable, Dict, Optional

logger = logging.getLogger(__name__)


class ExitCode(IntEnum):
    SUCCESS = 0
    FAILURE = 1
    USAGE = 2
    GRAPH_INVALID = 3
    HYPOTHESIS_VIOLATED = 4
    NOT_A_FRAME = 5


class PWGraphError(Exception):
    exit_code: ExitCode = ExitCode.FAILURE

    def __init__(self, message: str = "", **details: Any):
        super().__init__(message or self.__class__.__name__)
        self.details = details


class ParseError(PWGraphError):
    exit_code = ExitCode.GRAPH_INVALID


class SelfLoop(PWGraphError):
    exit_code = ExitCode.GRAPH_INVALID

    def __init__(self, vertex: int):
        super().__init__(f"self-loop at vertex {vertex}", vertex=vertex)
        self.vertex = vertex


class EmptyGraph(PWGraphError):
    exit_code = ExitCode.GRAPH_INVALID


class Disconnected(PWGraphError):
    exit_code = ExitCode.GRAPH_INVALID


class InvalidParameter(PWGraphError):
    exit_code = ExitCode.USAGE


class OutOfRange(PWGraphError):
    exit_code = ExitCode.USAGE


class HostMismatch(PWGraphError):
    exit_code = ExitCode.USAGE


class EmptyBoundary(PWGraphError):
    exit_code = ExitCode.HYPOTHESIS_VIOLATED


class OverlappingClosures(PWGraphError):
    exit_code = ExitCode.HYPOTHESIS_VIOLATED


class SingularRestriction(PWGraphError):
    exit_code = ExitCode.HYPOTHESIS_VIOLATED


class NoFeasibleSubset(PWGraphError):
    exit_code = ExitCode.HYPOTHESIS_VIOLATED


class TooLarge(PWGraphError):
    exit_code = ExitCode.HYPOTHESIS_VIOLATED


class NotAFrame(PWGraphError):
    exit_code = ExitCode.NOT_A_FRAME


class NoConvergence(PWGraphError):
    exit_code = ExitCode.NOT_A_FRAME


class ConvergenceFailure(PWGraphError):
    pass


class SingularPower(PWGraphError):
    pass


class ZeroSignal(PWGraphError):
    pass


class SystemErrorHandler:
    def __init__(self):
        self.error_counts: Dict[str, Dict[str, Any]] = {}

    def record_error(self, error_type: str, component: str, details: Optional[Dict[str, Any]] = None):
        key = f"{component}:{error_type}"

        if key not in self.error_counts:
            self.error_counts[key] = {
                'count': 0,
                'first_occurrence': datetime.utcnow(),
                'last_occurrence': datetime.utcnow(),
                'details': []
            }

        self.error_counts[key]['count'] += 1
        self.error_counts[key]['last_occurrence'] = datetime.utcnow()

        if details:
            self.error_counts[key]['details'].append({
                'timestamp': datetime.utcnow().isoformat(),
                'details': details
            })

        logger.error(f"Error recorded: {error_type} in {component} (count: {self.error_counts[key]['count']})")

    def get_error_statistics(self) -> Dict[str, Any]:
        return {
            'error_counts': {k: v for k, v in self.error_counts.items()},
            'timestamp': datetime.utcnow().isoformat()
        }

    def reset(self):
        self.error_counts.clear()


def exit_code_for(exc: BaseException) -> ExitCode:
    if isinstance(exc, PWGraphError):
        return exc.exit_code
    return ExitCode.FAILURE


def with_error_handling(component: str, operation: str) -> Callable:
    """Log and record failures of ``operation`` before re-raising them."""
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except PWGraphError as e:
                system_error_handler.record_error(
                    type(e).__name__, component, {'operation': operation, 'error': str(e), **e.details}
                )
                raise
            except Exception as e:
                logger.error(f"Unexpected failure in {component}:{operation}: {e}", exc_info=True)
                system_error_handler.record_error(type(e).__name__, component, {'operation': operation, 'error': str(e)})
                raise

        return wrapper

    return decorator


system_error_handler = SystemErrorHandler()
