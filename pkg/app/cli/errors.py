import logging
from functools import wraps
from typing import Callable

from pydantic import ValidationError

from app.utils.errors import NoThresholdError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NO_SOLUTION = 3
EXIT_IO = 4


class CommandError(Exception):
    """Failure of a subcommand, carrying the process exit code"""

    def __init__(self, exit_code: int, detail: str):
        super().__init__(detail)
        self.exit_code = exit_code
        self.detail = detail


def format_validation_error(error: ValidationError) -> str:
    lines = []
    for item in error.errors():
        location = ".".join(str(part) for part in item.get("loc", ())) or "config"
        lines.append(f"{location}: {item.get('msg', 'invalid value')}")
    return "; ".join(lines)


def translate_errors(handler: Callable) -> Callable:
    """Map domain and I/O failures raised by a handler onto CommandError."""

    @wraps(handler)
    def wrapper(args) -> int:
        try:
            return handler(args)
        except CommandError:
            raise
        except NoThresholdError as e:
            logger.error(f"Error solving threshold: {str(e)}")
            raise CommandError(EXIT_NO_SOLUTION, str(e)) from e
        except ValidationError as e:
            raise CommandError(EXIT_VALIDATION, format_validation_error(e)) from e
        except ValueError as e:
            raise CommandError(EXIT_VALIDATION, str(e)) from e
        except OSError as e:
            logger.error(f"Error accessing {e.filename}: {str(e)}")
            target = f"{e.filename}: " if e.filename else ""
            raise CommandError(EXIT_IO, f"{target}{e.strerror or str(e)}") from e

    return wrapper
