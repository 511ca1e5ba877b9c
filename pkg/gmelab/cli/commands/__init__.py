"""
Sub-commands; each module exposes register(subparsers, parents)
"""
from . import activate, check, export, sweep

COMMANDS = (check, activate, sweep, export)

__all__ = ["COMMANDS", "activate", "check", "export", "sweep"]
