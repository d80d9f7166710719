import asyncio
from functools import wraps
from typing import (
    Any,
    Callable,
    Coroutine,
    ParamSpec,
    TypeVar,
)

import logfire
import typer


TParams = ParamSpec("TParams")
TReturn = TypeVar("TReturn")

NUMERICAL_FAILURE = 1
USAGE_ERROR = 2


def asyncio_run(
    func: Callable[TParams, Coroutine[Any, Any, TReturn]],
) -> Callable[TParams, TReturn]:
    @wraps(func)
    def wrapper(*args: TParams.args, **kwargs: TParams.kwargs) -> TReturn:
        return asyncio.run(func(*args, **kwargs))

    return wrapper


def exit_codes(
    func: Callable[TParams, Coroutine[Any, Any, TReturn]],
) -> Callable[TParams, Coroutine[Any, Any, TReturn]]:
    """Map numerical failures to exit 1 and invalid arguments to exit 2."""

    @wraps(func)
    async def wrapper(*args: TParams.args, **kwargs: TParams.kwargs) -> TReturn:
        try:
            return await func(*args, **kwargs)
        except ArithmeticError as e:
            logfire.error("numerical failure: {error}", error=str(e))
            typer.echo(f"error: {e}", err=True)
            raise typer.Exit(NUMERICAL_FAILURE) from e
        except ValueError as e:
            typer.echo(f"error: {e}", err=True)
            raise typer.Exit(USAGE_ERROR) from e

    return wrapper
