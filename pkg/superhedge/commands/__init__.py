"""
Commands package - CLI subcommands.
"""
from . import check, hedge, price, support
from .context import CommandContext, build_context

COMMANDS = {
    "support": support.run,
    "price": price.run,
    "check": check.run,
    "hedge": hedge.run,
}

__all__ = [
    "COMMANDS",
    "CommandContext",
    "build_context",
]
