"""HTTP service and the command dispatch it shares with the CLI."""

from .handlers import COMMANDS, dispatch

__all__ = ["COMMANDS", "dispatch", "create_app"]


def create_app():
    # imported lazily so the core package works without fastapi installed
    from .app import create_app as _create

    return _create()
